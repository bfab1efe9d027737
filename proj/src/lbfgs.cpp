#include "roofforge/lbfgs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

namespace roofforge {

const char* lbfgs_status_name(LbfgsStatus s)
{
    switch (s) {
    case LbfgsStatus::gradient: return "gradient";
    case LbfgsStatus::energy: return "energy";
    case LbfgsStatus::max_iterations: return "max_iterations";
    case LbfgsStatus::time_limit: return "time_limit";
    }
    return "max_iterations";
}

namespace {

struct Sample {
    double a = 0.0;
    double f = 0.0;
    double df = 0.0;
};

/// Minimizer of the cubic through two samples, or NaN when it does not exist.
double cubic_min(const Sample& p, const Sample& q)
{
    const double d1 = p.df + q.df - 3.0 * (p.f - q.f) / (p.a - q.a);
    const double disc = d1 * d1 - p.df * q.df;
    if (!(disc >= 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    const double d2 = std::copysign(std::sqrt(disc), q.a - p.a);
    const double den = q.df - p.df + 2.0 * d2;
    if (den == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return q.a - (q.a - p.a) * (q.df + d2 - d1) / den;
}

class LineSearch {
public:
    LineSearch(const Objective& fg, const Eigen::VectorXd& x, const Eigen::VectorXd& d, double f0,
               double df0, const LbfgsOptions& opt)
        : fg_(fg), x_(x), d_(d), f0_(f0), df0_(df0), opt_(opt), g_(x.size())
    {
    }

    /// Returns true when a step satisfying the strong Wolfe conditions (or at least
    /// sufficient decrease) was found; best_* hold that point.
    bool run(double a_init)
    {
        Sample prev{0.0, f0_, df0_};
        double a = a_init;
        for (int i = 0; i < 40; ++i) {
            const Sample cur = eval(a);
            if (!std::isfinite(cur.f)) {
                a = 0.5 * (prev.a + a);
                continue;
            }
            if (cur.f > f0_ + opt_.c1 * a * df0_ || (i > 0 && cur.f >= prev.f))
                return zoom(prev, cur);
            if (std::abs(cur.df) <= -opt_.c2 * df0_)
                return true;
            if (cur.df >= 0.0)
                return zoom(cur, prev);
            double next = cubic_min(prev, cur);
            if (!std::isfinite(next) || next <= cur.a * 1.1 || next > cur.a * 10.0)
                next = cur.a * 2.0;
            prev = cur;
            a = next;
        }
        return have_best_;
    }

    double best_a() const { return best_.a; }
    double best_f() const { return best_.f; }
    const Eigen::VectorXd& best_x() const { return best_x_; }
    const Eigen::VectorXd& best_g() const { return best_g_; }

private:
    Sample eval(double a)
    {
        const Eigen::VectorXd xa = x_ + a * d_;
        const double f = fg_(xa, g_);
        Sample s{a, f, g_.dot(d_)};
        if (std::isfinite(f) && f <= f0_ + opt_.c1 * a * df0_ && (!have_best_ || f < best_.f)) {
            have_best_ = true;
            best_ = s;
            best_x_ = xa;
            best_g_ = g_;
        }
        return s;
    }

    bool zoom(Sample lo, Sample hi)
    {
        for (int i = 0; i < 40; ++i) {
            const double left = std::min(lo.a, hi.a);
            const double right = std::max(lo.a, hi.a);
            const double width = right - left;
            if (width <= 1e-16 * std::max(1.0, right))
                break;
            double a = cubic_min(lo, hi);
            if (!std::isfinite(a) || a < left + 0.1 * width || a > right - 0.1 * width)
                a = 0.5 * (lo.a + hi.a);
            const Sample cur = eval(a);
            if (!std::isfinite(cur.f) || cur.f > f0_ + opt_.c1 * a * df0_ || cur.f >= lo.f) {
                hi = cur;
            } else {
                if (std::abs(cur.df) <= -opt_.c2 * df0_) {
                    best_ = cur;
                    best_x_ = x_ + a * d_;
                    best_g_ = g_;
                    have_best_ = true;
                    return true;
                }
                if (cur.df * (hi.a - lo.a) >= 0.0)
                    hi = lo;
                lo = cur;
            }
        }
        return have_best_;
    }

    const Objective& fg_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& d_;
    double f0_;
    double df0_;
    const LbfgsOptions& opt_;
    Eigen::VectorXd g_;
    bool have_best_ = false;
    Sample best_;
    Eigen::VectorXd best_x_;
    Eigen::VectorXd best_g_;
};

}  // namespace

LbfgsReport minimize_lbfgs(const Objective& fg, Eigen::VectorXd& x, const LbfgsOptions& opt,
                           const IterationCallback& on_iteration)
{
    const auto start = std::chrono::steady_clock::now();
    LbfgsReport report;
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n);
    double f = fg(x, g);
    report.f = f;
    report.grad_inf = n ? g.lpNorm<Eigen::Infinity>() : 0.0;
    if (n == 0 || report.grad_inf < opt.tol_grad) {
        report.status = LbfgsStatus::gradient;
        return report;
    }

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;
    bool restarted = false;
    for (int it = 1; it <= opt.max_iters; ++it) {
        if (opt.time_limit > 0.0) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (elapsed > opt.time_limit) {
                report.status = LbfgsStatus::time_limit;
                return report;
            }
        }

        // Two-loop recursion.
        Eigen::VectorXd q = -g;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha(m);
        for (int i = m - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (m > 0)
            q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (int i = 0; i < m; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd d = q;
        double df0 = g.dot(d);
        if (!(df0 < 0.0)) {
            d = -g;
            df0 = -g.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        const double a0 = s_hist.empty() ? std::min(1.0, 1.0 / d.lpNorm<Eigen::Infinity>()) : 1.0;
        LineSearch ls(fg, x, d, f, df0, opt);
        const bool ok = ls.run(a0);
        if (!ok) {
            if (!s_hist.empty() && !restarted) {
                // Drop curvature pairs and retry once along steepest descent.
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
                restarted = true;
                --it;
                continue;
            }
            report.status = LbfgsStatus::energy;  // no decrease is attainable
            report.iterations = it - 1;
            return report;
        }
        restarted = false;

        const Eigen::VectorXd s = ls.best_x() - x;
        const Eigen::VectorXd y = ls.best_g() - g;
        const double decrease = f - ls.best_f();
        x = ls.best_x();
        g = ls.best_g();
        f = ls.best_f();
        report.f = f;
        report.iterations = it;
        report.grad_inf = g.lpNorm<Eigen::Infinity>();
        if (on_iteration)
            on_iteration(it, x, f);

        const double sy = s.dot(y);
        if (sy > 1e-300 * std::max(1.0, y.squaredNorm()) && sy > 0.0) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opt.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        if (report.grad_inf < opt.tol_grad) {
            report.status = LbfgsStatus::gradient;
            return report;
        }
        if (decrease < opt.tol_energy) {
            report.status = LbfgsStatus::energy;
            return report;
        }
    }
    report.status = LbfgsStatus::max_iterations;
    return report;
}

}  // namespace roofforge
