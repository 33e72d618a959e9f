#include "minhash/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minhash {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double richardson_step(const CellModel& model, double theta) {
    const double scale = std::max(model.theta_hi - model.theta_lo, std::abs(theta));
    double h = 1e-5 * scale;
    const double width = model.theta_hi - model.theta_lo;
    if (2 * h > width) h = width / 4;
    return h;
}

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

double log_likelihood(const CellModel& model, std::span<const uint64_t> counts,
                      double theta) {
    if (counts.size() != model.m) throw Error("counts length does not match model");
    const std::vector<double> q = model.probs(theta);
    double ll = 0;
    for (size_t i = 0; i < model.m; ++i) {
        if (counts[i] == 0) continue;
        if (!(q[i] > 0)) return -kInf;
        ll += double(counts[i]) * std::log(q[i]);
    }
    return ll;
}

std::vector<double> cell_derivatives(const CellModel& model, double theta) {
    if (model.derivs) return model.derivs(theta);
    const double h = richardson_step(model, theta);
    // keep the whole stencil inside the domain
    const double c = clamp(theta, model.theta_lo + h, model.theta_hi - h);
    const std::vector<double> qp = model.probs(c + h);
    const std::vector<double> qm = model.probs(c - h);
    const std::vector<double> qp2 = model.probs(c + h / 2);
    const std::vector<double> qm2 = model.probs(c - h / 2);
    std::vector<double> d(model.m);
    for (size_t i = 0; i < model.m; ++i) {
        const double d1 = (qp[i] - qm[i]) / (2 * h);
        const double d2 = (qp2[i] - qm2[i]) / h;
        d[i] = (4 * d2 - d1) / 3;
    }
    return d;
}

double score(const CellModel& model, std::span<const uint64_t> counts, double theta) {
    if (counts.size() != model.m) throw Error("counts length does not match model");
    const std::vector<double> q = model.probs(theta);
    const std::vector<double> d = cell_derivatives(model, theta);
    double s = 0;
    for (size_t i = 0; i < model.m; ++i) {
        if (counts[i] == 0) continue;
        if (!(q[i] > 0)) return (d[i] > 0) ? kInf : -kInf;
        s += double(counts[i]) * d[i] / q[i];
    }
    return s;
}

double fisher_info(const CellModel& model, double theta, uint64_t k) {
    const std::vector<double> q = model.probs(theta);
    const std::vector<double> d = cell_derivatives(model, theta);
    double info = 0;
    for (size_t i = 0; i < model.m; ++i) {
        if (q[i] < 1e-300) {
            if (std::abs(d[i]) < 1e-150) continue;  // dead cell, negligible slope
            return std::numeric_limits<double>::max();  // diverging information
        }
        info += d[i] * d[i] / q[i];
    }
    info *= double(k);
    if (!std::isfinite(info)) return std::numeric_limits<double>::max();
    return info;
}

MleSolution solve_mle(const CellModel& model, std::span<const uint64_t> counts) {
    if (counts.size() != model.m) throw Error("counts length does not match model");
    uint64_t k = 0;
    for (uint64_t c : counts) k += c;
    if (k == 0) throw Error("counts are empty");
    const double lo = model.theta_lo, hi = model.theta_hi;
    if (!(hi > lo)) throw Error("empty parameter domain");

    const auto ll = [&](double t) { return log_likelihood(model, counts, t); };

    // flat likelihood (all q constant in theta) cannot be estimated
    {
        double mn = kInf, mx = -kInf;
        for (int i = 1; i <= 5; ++i) {
            const double v = ll(lo + (hi - lo) * i / 6.0);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (std::isfinite(mx) && mx - mn <= 1e-12 * (1 + std::abs(mx)))
            throw Error("flat likelihood: model does not depend on theta");
    }

    const double tol = 1e-12 * std::max(1e-12, std::abs(hi));

    const auto golden = [&](double a, double b) {
        static const double invphi = (std::sqrt(5.0) - 1) / 2;
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = ll(x1), f2 = ll(x2);
        for (int it = 0; it < 300 && (b - a) > tol; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = ll(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = ll(x1);
            }
        }
        return 0.5 * (a + b);
    };

    double theta = golden(lo, hi);
    double best = ll(theta);

    // unimodality guard: a probe beating the golden-section result means the
    // bracketing assumption failed somewhere; rescan on a dense grid
    {
        double probe_best = -kInf, probe_arg = theta;
        for (int i = 0; i <= 32; ++i) {
            const double t = lo + (hi - lo) * i / 32.0;
            const double v = ll(t);
            if (v > probe_best) {
                probe_best = v;
                probe_arg = t;
            }
        }
        if (probe_best > best + 1e-9 * (1 + std::abs(best))) {
            constexpr int kGrid = 4096;
            double grid_best = probe_best, grid_arg = probe_arg;
            for (int i = 0; i <= kGrid; ++i) {
                const double t = lo + (hi - lo) * i / kGrid;
                const double v = ll(t);
                if (v > grid_best) {
                    grid_best = v;
                    grid_arg = t;
                }
            }
            const double cell = (hi - lo) / kGrid;
            theta = golden(std::max(lo, grid_arg - 2 * cell),
                           std::min(hi, grid_arg + 2 * cell));
            best = ll(theta);
        }
    }

    // Polish with a bisection pass on the numeric score: golden section stalls
    // once likelihood differences drop below rounding noise (|theta - theta*|
    // ~ sqrt(eps) * scale), while the score still crosses zero cleanly. The
    // bracket expands until it captures the sign change.
    {
        const double range = hi - lo;
        for (double w = 1e-6 * range; w <= 1e-3 * range; w *= 16) {
            double a = std::max(lo, theta - w), b = std::min(hi, theta + w);
            if (!(a < b)) break;
            if (!(score(model, counts, a) > 0) || !(score(model, counts, b) < 0)) continue;
            for (int it = 0; it < 100 && (b - a) > tol / 4; ++it) {
                const double mid = 0.5 * (a + b);
                if (score(model, counts, mid) > 0)
                    a = mid;
                else
                    b = mid;
            }
            const double polished = 0.5 * (a + b);
            if (ll(polished) >= best - 1e-9 * (1 + std::abs(best))) {
                theta = polished;
                best = ll(theta);
            }
            break;
        }
    }

    MleSolution sol;
    sol.theta_hat = theta;
    sol.log_lik = best;
    sol.at_boundary =
        (theta - lo) <= 1e-9 * std::abs(hi) || (hi - theta) <= 1e-9 * std::abs(hi);

    // information one derivative-step inside when the solution sits on an edge
    const double h = richardson_step(model, theta);
    const double theta_info = clamp(theta, lo + h, hi - h);
    sol.fisher_info = fisher_info(model, theta_info, k);
    sol.var_asymptotic = 1.0 / sol.fisher_info;
    return sol;
}

CellModel three_cell_model(double f1, double f2) {
    if (!(f1 > 0) || !(f2 > 0)) throw Error("cardinalities must be positive");
    CellModel m;
    m.m = 3;
    m.theta_lo = 0;
    m.theta_hi = std::min(f1, f2);
    m.probs = [f1, f2](double a) {
        const double u = f1 + f2 - a;
        return std::vector<double>{a / u, (f1 - a) / u, (f2 - a) / u};
    };
    m.derivs = [f1, f2](double a) {
        const double u = f1 + f2 - a;
        const double u2 = u * u;
        return std::vector<double>{(f1 + f2) / u2, -f2 / u2, -f1 / u2};
    };
    return m;
}

CellModel bbit_cell_model(const GroupingScheme& scheme, double r1, double r2) {
    make_scheme(scheme.tag, scheme.b);
    if (!(r1 > 0) || !(r2 > 0)) throw Error("rates must be positive");
    CellModel m;
    m.m = scheme.cell_count();
    m.theta_lo = 0;
    m.theta_hi = std::min(r1, r2);
    m.probs = [scheme, r1, r2](double s) {
        return grouped_probs(scheme, RateTriple(r1, r2, s));
    };
    return m;
}

}  // namespace minhash
