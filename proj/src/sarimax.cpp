#include "avi/sarimax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "avi/rng.hpp"
#include "avi/stats.hpp"

namespace avi {

namespace {

// Durbin-Levinson map from partial autocorrelations in (-1,1) to a
// stationary AR coefficient vector (same recursion handles invertible MA).
std::vector<double> pacf_to_coeffs(std::span<const double> pacf) {
    std::vector<double> coeffs(pacf.begin(), pacf.end());
    std::vector<double> work = coeffs;
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            work[k] -= coeffs[j] * coeffs[j - k - 1];
        }
        std::copy(work.begin(), work.begin() + static_cast<long>(j), coeffs.begin());
    }
    return coeffs;
}

// (1 + a_1 L + ... )(1 + b_1 L^s + ...) with implicit leading 1 dropped from
// the representation: inputs/outputs are the coefficient tails.
std::vector<double> multiply_poly(std::span<const double> a, std::span<const double> b,
                                  unsigned s) {
    std::vector<double> full(a.size() + b.size() * s, 0.0);
    auto at = [&](std::size_t i) -> double {
        if (i == 0) return 1.0;
        return i <= a.size() ? a[i - 1] : 0.0;
    };
    for (std::size_t j = 0; j <= b.size(); ++j) {
        const double bj = j == 0 ? 1.0 : b[j - 1];
        if (bj == 0.0) continue;
        for (std::size_t i = 0; i <= a.size(); ++i) {
            const std::size_t deg = i + j * s;
            if (deg == 0) continue;
            full[deg - 1] += at(i) * bj;
        }
    }
    return full;
}

// Coefficient tail of (1-L)^d (1-L^s)^D; c_0 = 1 implicit.
std::vector<double> differencing_poly(unsigned d, unsigned D, unsigned s) {
    std::vector<double> poly{1.0};  // full coefficients, poly[j] for L^j
    auto mul_factor = [&](unsigned lag) {
        std::vector<double> next(poly.size() + lag, 0.0);
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j];
            next[j + lag] -= poly[j];
        }
        poly = std::move(next);
    };
    for (unsigned i = 0; i < d; ++i) mul_factor(1);
    for (unsigned i = 0; i < D; ++i) mul_factor(s);
    return {poly.begin() + 1, poly.end()};
}

std::vector<double> apply_differencing(std::span<const double> y, unsigned d, unsigned D,
                                       unsigned s) {
    std::vector<double> v(y.begin(), y.end());
    auto diff_at = [&](unsigned lag) {
        if (v.size() <= lag) throw std::invalid_argument("series too short to difference");
        std::vector<double> next(v.size() - lag);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = v[i + lag] - v[i];
        v = std::move(next);
    };
    for (unsigned i = 0; i < d; ++i) diff_at(1);
    for (unsigned i = 0; i < D; ++i) diff_at(s);
    return v;
}

double spectral_radius(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    return m.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd initial_covariance(const StateSpace& ss) {
    const auto m = ss.transition.rows();
    const Eigen::MatrixXd rrt = ss.sigma2 * (ss.innovation * ss.innovation.transpose());
    if (m <= 30 && spectral_radius(ss.transition) < 1.0 - 1e-8) {
        // vec(P) = (I - T kron T)^{-1} vec(sigma2 R R')
        const auto mm = m * m;
        Eigen::MatrixXd kron(mm, mm);
        for (long i = 0; i < m; ++i) {
            for (long j = 0; j < m; ++j) {
                kron.block(i * m, j * m, m, m) = ss.transition(i, j) * ss.transition;
            }
        }
        const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(mm, mm) - kron;
        const Eigen::VectorXd vec_q = Eigen::Map<const Eigen::VectorXd>(rrt.data(), mm);
        const Eigen::VectorXd vec_p = lhs.colPivHouseholderQr().solve(vec_q);
        Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(vec_p.data(), m, m);
        return 0.5 * (P + P.transpose());
    }
    return 1e6 * Eigen::MatrixXd::Identity(m, m);
}

struct FilterOutput {
    double loglik = 0.0;          // at the given sigma2
    double profile_loglik = 0.0;  // sigma2 concentrated out
    double sigma2_hat = 0.0;
    std::vector<double> predictions;  // one-step-ahead signal part Z a_{t|t-1}
};

FilterOutput run_filter(const StateSpace& ss, std::span<const double> y,
                        const Eigen::MatrixXd& exog, bool want_predictions) {
    const auto n = static_cast<long>(y.size());
    if (ss.exog_beta.size() > 0 && (exog.rows() != n || exog.cols() != ss.exog_beta.size())) {
        throw std::invalid_argument("kalman filter: exog dimensions do not match beta");
    }
    if (ss.sigma2 <= 0.0) throw std::invalid_argument("kalman filter: sigma2 must be positive");

    const auto m = ss.transition.rows();
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd P = initial_covariance(ss);
    const Eigen::MatrixXd rrt = ss.sigma2 * (ss.innovation * ss.innovation.transpose());

    FilterOutput out;
    if (want_predictions) out.predictions.resize(y.size());
    double sum_log_f = 0.0;
    double sum_v2_f = 0.0;
    for (long t = 0; t < n; ++t) {
        double mu = ss.intercept + a(0);
        if (ss.exog_beta.size() > 0) mu += exog.row(t).dot(ss.exog_beta);
        if (want_predictions) out.predictions[static_cast<std::size_t>(t)] = mu;
        const double v = y[static_cast<std::size_t>(t)] - mu;
        const double F = P(0, 0);
        if (!(F > 0.0) || !std::isfinite(F)) {
            throw std::runtime_error("kalman filter: innovation variance lost positivity at step " +
                                     std::to_string(t));
        }
        sum_log_f += std::log(F);
        sum_v2_f += v * v / F;
        const Eigen::VectorXd tp = ss.transition * P.col(0);
        const Eigen::VectorXd K = tp / F;
        a = ss.transition * a + K * v;
        P = ss.transition * P * ss.transition.transpose() - tp * tp.transpose() / F + rrt;
        P = 0.5 * (P + P.transpose());
    }
    const double nn = static_cast<double>(n);
    out.loglik = -0.5 * (nn * std::log(2.0 * M_PI) + sum_log_f + sum_v2_f);
    // profile form: rescale sigma2 by sum_v2_f / n (valid because F scales
    // linearly with sigma2 when the filter is run at sigma2 = 1)
    out.sigma2_hat = sum_v2_f / nn;
    // clamp so an exact fit (constant series) stays finite and maximal
    out.profile_loglik =
        -0.5 * nn * (std::log(2.0 * M_PI) + 1.0 + std::log(std::max(out.sigma2_hat, 1e-300))) -
        0.5 * sum_log_f;
    return out;
}

}  // namespace

std::string ModelSpec::to_string() const {
    std::ostringstream os;
    os << "(" << p << "," << d << "," << q << ")";
    if (s > 0) os << "(" << P << "," << D << "," << Q << ")[" << s << "]";
    return os.str();
}

void validate(const ModelSpec& spec) {
    if (spec.s == 0 && (spec.P || spec.D || spec.Q)) {
        throw std::invalid_argument("seasonal orders require a seasonal period s > 0");
    }
    for (const unsigned o : {spec.p, spec.d, spec.q, spec.P, spec.D, spec.Q}) {
        if (o > 4) throw std::invalid_argument("model orders above 4 are not supported");
    }
}

StateSpace to_state_space(const ModelSpec& spec, const SarimaxParams& params) {
    validate(spec);
    if (params.ar.size() != spec.p || params.ma.size() != spec.q ||
        params.sar.size() != spec.P || params.sma.size() != spec.Q ||
        params.exog_beta.size() != spec.exog_count) {
        throw std::invalid_argument("parameter dimensions do not match the model spec");
    }
    // multiplied polynomials phi(L)Phi(L^s), theta(L)Theta(L^s); AR tail sign
    // convention: y_t = sum phi_i y_{t-i} + ..., so multiply (1 - phi L)(1 - Phi L^s)
    std::vector<double> neg_ar(params.ar.size());
    for (std::size_t i = 0; i < params.ar.size(); ++i) neg_ar[i] = -params.ar[i];
    std::vector<double> neg_sarv(params.sar.size());
    for (std::size_t i = 0; i < params.sar.size(); ++i) neg_sarv[i] = -params.sar[i];
    std::vector<double> ar_poly = multiply_poly(neg_ar, neg_sarv, spec.s);
    for (double& c : ar_poly) c = -c;
    const std::vector<double> ma_poly = multiply_poly(params.ma, params.sma, spec.s);

    const auto r = static_cast<long>(std::max(ar_poly.size(), ma_poly.size() + 1));
    StateSpace ss;
    ss.transition = Eigen::MatrixXd::Zero(r, r);
    for (long i = 0; i < r; ++i) {
        if (i < static_cast<long>(ar_poly.size())) {
            ss.transition(i, 0) = ar_poly[static_cast<std::size_t>(i)];
        }
        if (i + 1 < r) ss.transition(i, i + 1) = 1.0;
    }
    ss.innovation = Eigen::VectorXd::Zero(r);
    ss.innovation(0) = 1.0;
    for (long i = 1; i < r; ++i) {
        if (i - 1 < static_cast<long>(ma_poly.size())) {
            ss.innovation(i) = ma_poly[static_cast<std::size_t>(i - 1)];
        }
    }
    ss.sigma2 = params.sigma2;
    ss.intercept = params.intercept;
    ss.exog_beta = Eigen::Map<const Eigen::VectorXd>(params.exog_beta.data(),
                                                     static_cast<long>(params.exog_beta.size()));
    return ss;
}

double kalman_loglik(const StateSpace& ss, std::span<const double> observations,
                     const Eigen::MatrixXd& exog) {
    if (observations.empty()) throw std::invalid_argument("kalman_loglik: no observations");
    for (const double v : observations) {
        if (!std::isfinite(v)) throw std::invalid_argument("kalman_loglik: non-finite observation");
    }
    return run_filter(ss, observations, exog, false).loglik;
}

Dataset build_design(const WeeklySeries& cases, const std::vector<WeeklySeries>& exog_list,
                     int lag, std::size_t train_weeks, std::size_t eval_weeks) {
    if (lag > 0) throw std::invalid_argument("build_design: exog lag must be non-positive");
    const auto shift = static_cast<std::size_t>(-lag);

    // common aligned range across cases and all exog
    Date lo = cases.start_week;
    Date hi = cases.last_week();
    for (const auto& e : exog_list) {
        lo = std::max(lo, e.start_week);
        hi = std::min(hi, e.last_week());
    }
    if (lo > hi) throw std::invalid_argument("build_design: series do not overlap");
    const auto total = static_cast<std::size_t>(weeks_between(lo, hi)) + 1;
    if (total <= shift) {
        throw std::invalid_argument("build_design: need more than " + std::to_string(shift) +
                                    " weeks, have " + std::to_string(total));
    }
    const std::size_t effective = total - shift;
    if (train_weeks == 0) {
        if (effective <= eval_weeks) {
            throw std::invalid_argument("build_design: only " + std::to_string(effective) +
                                        " effective weeks, eval window needs " +
                                        std::to_string(eval_weeks) + " plus training data");
        }
        train_weeks = effective - eval_weeks;
    }
    if (train_weeks + eval_weeks > effective) {
        throw std::invalid_argument(
            "build_design: require " + std::to_string(shift + train_weeks + eval_weeks) +
            " weeks, have " + std::to_string(total));
    }

    Dataset ds;
    ds.exog_lag = lag;
    ds.train_weeks = train_weeks;
    ds.eval_weeks = eval_weeks;
    const std::size_t used = train_weeks + eval_weeks;

    auto window = [&](const WeeklySeries& s, std::size_t first, Date start) {
        const auto off = static_cast<std::size_t>(weeks_between(s.start_week, lo)) + first;
        return WeeklySeries(start, {s.values.begin() + static_cast<long>(off),
                                    s.values.begin() + static_cast<long>(off + used)});
    };
    // cases occupy the last `used` weeks of the effective range
    const std::size_t case_first = total - used;
    const Date case_start = lo + std::chrono::days{7 * static_cast<long>(case_first)};
    ds.endog = window(cases, case_first, case_start);
    for (const auto& e : exog_list) {
        // exog value explaining cases[t] is the one |lag| weeks earlier,
        // re-dated to the case week it explains
        ds.exog.push_back(window(e, case_first - shift, case_start));
    }
    return ds;
}

namespace {

struct ParamScaling {
    double z_mean = 0.0;
    double z_scale = 1.0;
    std::vector<double> x_scale;
};

// layout: [p ar pacf | q ma pacf | P sar pacf | Q sma pacf | exog | intercept]
SarimaxParams decode_params(const ModelSpec& spec, std::span<const double> u,
                            const ParamScaling& sc) {
    SarimaxParams params;
    std::size_t k = 0;
    auto take_pacf = [&](unsigned count) {
        std::vector<double> pacf(count);
        for (unsigned i = 0; i < count; ++i) pacf[i] = std::tanh(u[k++]);
        return pacf_to_coeffs(pacf);
    };
    params.ar = take_pacf(spec.p);
    params.ma = take_pacf(spec.q);
    params.sar = take_pacf(spec.P);
    params.sma = take_pacf(spec.Q);
    params.exog_beta.resize(spec.exog_count);
    for (unsigned j = 0; j < spec.exog_count; ++j) {
        params.exog_beta[j] = u[k++] * sc.z_scale / sc.x_scale[j];
    }
    params.intercept = spec.include_intercept ? sc.z_mean + u[k++] * sc.z_scale : 0.0;
    params.sigma2 = 1.0;  // concentrated out during optimization
    return params;
}

std::size_t free_param_count(const ModelSpec& spec) {
    return spec.p + spec.q + spec.P + spec.Q + spec.exog_count +
           (spec.include_intercept ? 1 : 0);
}

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, double tol, unsigned max_iter) {
    const std::size_t dim = x0.size();
    NelderMeadResult result;
    if (dim == 0) {
        result.fx = f({});
        result.converged = true;
        return result;
    }
    std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(x0.begin(), x0.end()));
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += 0.25;
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (const auto i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex = std::move(s2);
        fv = std::move(f2);
    };

    bool converged = false;
    for (unsigned iter = 0; iter < max_iter; ++iter) {
        order();
        const double spread = std::fabs(fv[dim] - fv[0]);
        if (spread <= tol * (std::fabs(fv[0]) + tol)) {
            converged = true;
            break;
        }
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] = centroid[j] + coef * (centroid[j] - simplex[dim][j]);
            }
            return x;
        };
        const auto xr = blend(1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const auto xe = blend(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[dim] = xe;
                fv[dim] = fe;
            } else {
                simplex[dim] = xr;
                fv[dim] = fr;
            }
        } else if (fr < fv[dim - 1]) {
            simplex[dim] = xr;
            fv[dim] = fr;
        } else {
            const auto xc = blend(fr < fv[dim] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[dim])) {
                simplex[dim] = xc;
                fv[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    }
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    result.x = simplex[0];
    result.fx = fv[0];
    result.converged = converged;
    return result;
}

Eigen::MatrixXd exog_matrix(const Dataset& ds, std::size_t first, std::size_t count,
                            unsigned d, unsigned D, unsigned s) {
    const auto cols = static_cast<long>(ds.exog.size());
    Eigen::MatrixXd X(static_cast<long>(count), cols);
    for (long j = 0; j < cols; ++j) {
        const auto col = apply_differencing(ds.exog[static_cast<std::size_t>(j)].values, d, D, s);
        for (std::size_t i = 0; i < count; ++i) {
            X(static_cast<long>(i), j) = col[first + i];
        }
    }
    return X;
}

}  // namespace

FittedModel fit(const ModelSpec& spec, const Dataset& dataset, std::uint64_t seed,
                unsigned restarts) {
    validate(spec);
    if (spec.exog_count != dataset.exog.size()) {
        throw std::invalid_argument("fit: spec exog_count does not match dataset");
    }
    const unsigned span = spec.total_diff_span();
    if (dataset.train_weeks <= span + free_param_count(spec) + 5) {
        throw std::invalid_argument("fit: train segment too short for the spec");
    }

    std::span<const double> train(dataset.endog.values.data(), dataset.train_weeks);
    const std::vector<double> z = apply_differencing(train, spec.d, spec.D, spec.s);
    Eigen::MatrixXd X(0, 0);
    if (spec.exog_count > 0) {
        X = exog_matrix(dataset, 0, z.size(), spec.d, spec.D, spec.s);
        // differenced exog columns start at the same offset as differenced endog
    }

    ParamScaling sc;
    {
        const Summary s_z = summarize(z);
        sc.z_mean = s_z.mean;
        sc.z_scale = std::max(s_z.stddev, 1e-8);
        for (unsigned j = 0; j < spec.exog_count; ++j) {
            std::vector<double> col(X.rows());
            for (long i = 0; i < X.rows(); ++i) col[static_cast<std::size_t>(i)] = X(i, static_cast<long>(j));
            sc.x_scale.push_back(std::max(summarize(col).stddev, 1e-8));
        }
    }

    const auto objective = [&](std::span<const double> u) -> double {
        try {
            const SarimaxParams params = decode_params(spec, u, sc);
            const StateSpace ss = to_state_space(spec, params);
            return -run_filter(ss, z, X, false).profile_loglik;
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    const std::size_t dim = free_param_count(spec);
    NelderMeadResult best;
    best.fx = std::numeric_limits<double>::infinity();
    bool any_finite = false;
    Rng rng(seed);
    for (unsigned r = 0; r < std::max(restarts, 1u); ++r) {
        std::vector<double> x0(dim);
        for (double& v : x0) v = rng.uniform(-0.5, 0.5);
        const auto res = nelder_mead(objective, x0, 1e-8, 500);
        if (std::isfinite(res.fx)) {
            any_finite = true;
            if (res.fx < best.fx || (res.fx == best.fx && !best.converged)) best = res;
        }
        if (dim == 0) break;
    }
    if (!any_finite) throw std::runtime_error("fit: likelihood non-finite at every restart");

    FittedModel model;
    model.spec = spec;
    model.seed = seed;
    model.converged = best.converged;
    model.params = decode_params(spec, best.x, sc);
    const StateSpace ss = to_state_space(spec, model.params);
    const FilterOutput out = run_filter(ss, z, X, false);
    model.params.sigma2 = std::max(out.sigma2_hat, 1e-300);
    model.loglik = out.profile_loglik;
    return model;
}

std::vector<double> forecast(const FittedModel& model, const Dataset& dataset) {
    const ModelSpec& spec = model.spec;
    if (spec.exog_count != dataset.exog.size()) {
        throw std::invalid_argument("forecast: dataset is missing exogenous series");
    }
    const auto& y = dataset.endog.values;
    const std::size_t total = dataset.train_weeks + dataset.eval_weeks;
    if (y.size() < total) throw std::invalid_argument("forecast: dataset shorter than split");
    for (const auto& e : dataset.exog) {
        if (e.values.size() < total) {
            throw std::invalid_argument("forecast: exog missing for part of the eval window");
        }
    }

    std::span<const double> all(y.data(), total);
    const std::vector<double> z = apply_differencing(all, spec.d, spec.D, spec.s);
    Eigen::MatrixXd X(0, 0);
    if (spec.exog_count > 0) X = exog_matrix(dataset, 0, z.size(), spec.d, spec.D, spec.s);

    const StateSpace ss = to_state_space(spec, model.params);
    const FilterOutput out = run_filter(ss, z, X, true);

    // back out level predictions through the differencing polynomial using
    // observed history (one-step-ahead, so past levels are known)
    const std::vector<double> dpoly = differencing_poly(spec.d, spec.D, spec.s);
    const unsigned span = spec.total_diff_span();
    std::vector<double> preds(dataset.eval_weeks);
    for (std::size_t k = 0; k < dataset.eval_weeks; ++k) {
        const std::size_t t_level = dataset.train_weeks + k;
        const std::size_t t_diff = t_level - span;
        double level = out.predictions[t_diff];
        for (std::size_t j = 0; j < dpoly.size(); ++j) {
            level -= dpoly[j] * y[t_level - (j + 1)];
        }
        preds[k] = level;
    }
    return preds;
}

double r2_score(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw std::invalid_argument("r2_score: length mismatch");
    if (actual.size() < 2) throw std::invalid_argument("r2_score: need at least 2 points");
    const Summary s = summarize(actual);
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_tot += (actual[i] - s.mean) * (actual[i] - s.mean);
        ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    }
    if (ss_tot == 0.0) throw std::invalid_argument("r2_score: actual values have zero variance");
    return 1.0 - ss_res / ss_tot;
}

std::vector<GridEntry> grid_search(const std::vector<ModelSpec>& grid, const Dataset& dataset,
                                   GridCriterion criterion, std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    std::vector<GridEntry> entries;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        GridEntry entry;
        entry.spec = grid[i];
        try {
            entry.model = fit(grid[i], dataset, derive_seed(seed, i), 1);
            if (criterion == GridCriterion::Aic) {
                entry.score = 2.0 * static_cast<double>(grid[i].n_params()) - 2.0 * entry.model.loglik;
            } else {
                const auto preds = forecast(entry.model, dataset);
                std::span<const double> actual(dataset.endog.values.data() + dataset.train_weeks,
                                               dataset.eval_weeks);
                entry.score = r2_score(actual, preds);
            }
        } catch (const std::exception&) {
            continue;
        }
        entries.push_back(std::move(entry));
    }
    if (entries.empty()) throw std::runtime_error("grid_search: every candidate fit failed");
    std::stable_sort(entries.begin(), entries.end(), [&](const GridEntry& a, const GridEntry& b) {
        return criterion == GridCriterion::Aic ? a.score < b.score : a.score > b.score;
    });
    return entries;
}

AblationReport run_ablation(const ModelSpec& base_spec, const Dataset& dataset,
                            std::size_t runs, std::uint64_t master_seed) {
    if (dataset.exog.size() != 2) {
        throw std::invalid_argument("run_ablation: dataset must carry posts and trends series");
    }
    if (runs == 0) throw std::invalid_argument("run_ablation: runs must be positive");

    struct ScenarioDef {
        const char* name;
        bool posts;
        bool trends;
    };
    const ScenarioDef defs[] = {{"i", false, false},
                                {"ii", true, false},
                                {"iii", false, true},
                                {"iv", true, true}};

    AblationReport report;
    report.runs = runs;
    report.master_seed = master_seed;

    std::span<const double> actual(dataset.endog.values.data() + dataset.train_weeks,
                                   dataset.eval_weeks);

    for (std::size_t sidx = 0; sidx < 4; ++sidx) {
        const auto& def = defs[sidx];
        Dataset sub = dataset;
        sub.exog.clear();
        if (def.posts) sub.exog.push_back(dataset.exog[0]);
        if (def.trends) sub.exog.push_back(dataset.exog[1]);
        ModelSpec spec = base_spec;
        spec.exog_count = static_cast<unsigned>(sub.exog.size());

        ScenarioResult sr;
        sr.name = def.name;
        sr.uses_posts = def.posts;
        sr.uses_trends = def.trends;
        for (std::size_t r = 0; r < runs; ++r) {
            const std::uint64_t seed = derive_seed(master_seed, sidx * runs + r);
            try {
                const FittedModel m = fit(spec, sub, seed, 1);
                const auto preds = forecast(m, sub);
                sr.r2.push_back(r2_score(actual, preds));
            } catch (const std::exception&) {
                ++sr.failures;
            }
        }
        if (sr.failures * 5 > runs) {
            throw std::runtime_error("ablation scenario " + sr.name + ": " +
                                     std::to_string(sr.failures) + "/" + std::to_string(runs) +
                                     " fits failed");
        }
        const Summary s = summarize(sr.r2);
        sr.mean_r2 = s.mean;
        if (sr.r2.size() >= 2) sr.std_r2 = s.stddev;
        report.scenarios.push_back(std::move(sr));
    }

    const auto& baseline = report.scenarios.front().r2;
    for (std::size_t sidx = 1; sidx < 4; ++sidx) {
        auto& sr = report.scenarios[sidx];
        const std::size_t n = std::min(sr.r2.size(), baseline.size());
        try {
            sr.wilcoxon_p_vs_baseline = wilcoxon_one_tailed(
                std::span<const double>(sr.r2.data(), n),
                std::span<const double>(baseline.data(), n));
        } catch (const std::invalid_argument&) {
            sr.wilcoxon_p_vs_baseline = 1.0;  // identical samples: no evidence
        }
    }

    report.pearson_exog = pearson_r(dataset.exog[0].values, dataset.exog[1].values);
    report.vif = vif({dataset.exog[0].values, dataset.exog[1].values}).vif;
    return report;
}

}  // namespace avi
