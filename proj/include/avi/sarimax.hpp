#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "avi/weekly.hpp"

namespace avi {

struct ModelSpec {
    unsigned p = 0, d = 0, q = 0;  // non-seasonal AR / integration / MA
    unsigned P = 0, D = 0, Q = 0;  // seasonal counterparts
    unsigned s = 0;                // seasonal period in weeks, 0 = non-seasonal
    bool include_intercept = true;
    unsigned exog_count = 0;

    unsigned ar_order() const { return p + s * P; }
    unsigned ma_order() const { return q + s * Q; }
    unsigned total_diff_span() const { return d + s * D; }
    /// Estimated parameter count including the innovation variance.
    unsigned n_params() const {
        return p + q + P + Q + exog_count + (include_intercept ? 1u : 0u) + 1u;
    }
    std::string to_string() const;
};

void validate(const ModelSpec& spec);

/// Coefficients on the natural (constrained) scale.
struct SarimaxParams {
    std::vector<double> ar, ma;    // non-seasonal
    std::vector<double> sar, sma;  // seasonal
    std::vector<double> exog_beta;
    double intercept = 0.0;
    double sigma2 = 1.0;
};

/// Harvey-form state-space matrices of the multiplied ARMA polynomial.
/// Observation: y_t = intercept + x_t'beta + Z alpha_t, Z = [1 0 ... 0];
/// alpha_{t+1} = T alpha_t + R eps_t, eps ~ N(0, sigma2).
struct StateSpace {
    Eigen::MatrixXd transition;   // m x m
    Eigen::VectorXd innovation;   // m x 1 (R)
    double sigma2 = 1.0;
    double intercept = 0.0;
    Eigen::VectorXd exog_beta;
};

StateSpace to_state_space(const ModelSpec& spec, const SarimaxParams& params);

/// Exact Gaussian log-likelihood via the prediction-error decomposition.
/// exog has one row per observation (may be 0 columns). Initialization is
/// the stationary unconditional covariance when the transition is stable,
/// else a 1e6 diffuse proxy.
double kalman_loglik(const StateSpace& ss, std::span<const double> observations,
                     const Eigen::MatrixXd& exog);

struct Dataset {
    WeeklySeries endog;                 // case counts over train+eval weeks
    std::vector<WeeklySeries> exog;     // lag-shifted, aligned to endog
    int exog_lag = 0;                   // non-positive
    std::size_t train_weeks = 0;
    std::size_t eval_weeks = 0;
};

/// Shifts every exogenous series so exog[t+lag] explains cases[t], trims the
/// effective sample, and splits it. train_weeks = 0 takes everything left
/// after the eval window.
Dataset build_design(const WeeklySeries& cases, const std::vector<WeeklySeries>& exog_list,
                     int lag, std::size_t train_weeks, std::size_t eval_weeks);

struct FittedModel {
    ModelSpec spec;
    SarimaxParams params;
    double loglik = 0.0;
    bool converged = false;
    std::uint64_t seed = 0;
};

/// Maximum-likelihood fit on the train segment. The optimizer is a
/// Nelder-Mead simplex over unconstrained coordinates (partial
/// autocorrelations through tanh for AR/MA stationarity and invertibility),
/// restarted from seeded uniform [-0.5, 0.5] points.
FittedModel fit(const ModelSpec& spec, const Dataset& dataset, std::uint64_t seed,
                unsigned restarts = 3);

/// One-step-ahead rolling predictions over the eval window, in level space.
std::vector<double> forecast(const FittedModel& model, const Dataset& dataset);

double r2_score(std::span<const double> actual, std::span<const double> predicted);

enum class GridCriterion { Aic, EvalR2 };

struct GridEntry {
    ModelSpec spec;
    double score = 0.0;  // AIC (lower better) or eval R2 (higher better)
    FittedModel model;
};

/// Fits every spec once (seeded) and ranks by the criterion; specs whose fit
/// fails are dropped. Throws when every fit fails.
std::vector<GridEntry> grid_search(const std::vector<ModelSpec>& grid, const Dataset& dataset,
                                   GridCriterion criterion, std::uint64_t seed);

struct ScenarioResult {
    std::string name;             // "i".."iv"
    bool uses_posts = false;
    bool uses_trends = false;
    std::vector<double> r2;       // one per successful run
    double mean_r2 = 0.0;
    std::optional<double> std_r2; // absent when runs == 1
    std::size_t failures = 0;
    std::optional<double> wilcoxon_p_vs_baseline;  // absent for scenario i
};

struct AblationReport {
    std::vector<ScenarioResult> scenarios;  // i, ii, iii, iv
    double pearson_exog = 0.0;
    std::vector<double> vif;  // posts, trends
    std::size_t runs = 0;
    std::uint64_t master_seed = 0;
};

/// Four-scenario exogenous ablation on a fixed spec: (i) none, (ii) posts
/// only, (iii) trends only, (iv) both. dataset.exog must hold exactly the
/// posts and trends series, in that order.
AblationReport run_ablation(const ModelSpec& base_spec, const Dataset& dataset,
                            std::size_t runs, std::uint64_t master_seed);

}  // namespace avi
