// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The semopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMOPT_CONVEX_CORE_HPP
#define SEMOPT_CONVEX_CORE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace semopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorCRef = Eigen::Ref<const Vector>;

/// Twice differentiable function R^n -> R. Gradients and Hessians are
/// accumulated (scaled by `weight`) so callers can assemble sums cheaply.
class SmoothFunction {
public:
    virtual ~SmoothFunction() = default;

    virtual double value(const VectorCRef& x) const = 0;
    virtual void add_gradient(const VectorCRef& x, double weight, Eigen::Ref<Vector> g) const = 0;
    virtual void add_hessian(const VectorCRef& x, double weight, Eigen::Ref<Matrix> h) const = 0;

    /// Coordinates the function depends on. Empty means "all".
    const std::vector<int>& support() const { return support_; }

    Vector gradient(const VectorCRef& x) const
    {
        Vector g = Vector::Zero(x.size());
        add_gradient(x, 1.0, g);
        return g;
    }
    Matrix hessian(const VectorCRef& x) const
    {
        Matrix h = Matrix::Zero(x.size(), x.size());
        add_hessian(x, 1.0, h);
        return h;
    }

protected:
    std::vector<int> support_;
};

/// Function given by three callables; used for ad-hoc programs and tests.
class LambdaFunction final : public SmoothFunction {
public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradFn = std::function<Vector(const Vector&)>;
    using HessFn = std::function<Matrix(const Vector&)>;

    LambdaFunction(ValueFn v, GradFn g, HessFn h) : v_(std::move(v)), g_(std::move(g)), h_(std::move(h)) {}

    double value(const VectorCRef& x) const override { return v_(Vector(x)); }
    void add_gradient(const VectorCRef& x, double w, Eigen::Ref<Vector> g) const override { g += w * g_(Vector(x)); }
    void add_hessian(const VectorCRef& x, double w, Eigen::Ref<Matrix> h) const override { h += w * h_(Vector(x)); }

private:
    ValueFn v_;
    GradFn g_;
    HessFn h_;
};

/// Sum of structured convex terms over a real vector:
///   constant + sum c_i x_i + sum c * log(1 + s x_i) + sum c (sum_j a_j x_j)^2
///   + sum c ||x_block||^2 + sum c (p . x_block)^2 + sum c (p . x_block).
/// Convexity requires log coefficients <= 0 and quadratic coefficients >= 0;
/// the builder methods do not enforce it.
class CompositeFunction final : public SmoothFunction {
public:
    CompositeFunction& constant(double c)
    {
        constant_ += c;
        return *this;
    }
    CompositeFunction& linear(int index, double coeff)
    {
        linear_.push_back({index, coeff});
        touch(index);
        return *this;
    }
    CompositeFunction& log1p(int index, double coeff, double scale)
    {
        logs_.push_back({index, coeff, scale});
        touch(index);
        return *this;
    }
    CompositeFunction& square_of_linear(std::vector<std::pair<int, double>> terms, double coeff)
    {
        for (const auto& t : terms)
            touch(t.first);
        squares_.push_back({std::move(terms), coeff});
        return *this;
    }
    CompositeFunction& block_norm2(int offset, int length, double coeff)
    {
        norms_.push_back({offset, length, coeff});
        touch_block(offset, static_cast<int>(length));
        return *this;
    }
    CompositeFunction& projection2(int offset, Vector p, double coeff)
    {
        touch_block(offset, static_cast<int>(p.size()));
        projections2_.push_back({offset, std::move(p), coeff});
        return *this;
    }
    CompositeFunction& projection(int offset, Vector p, double coeff)
    {
        touch_block(offset, static_cast<int>(p.size()));
        projections_.push_back({offset, std::move(p), coeff});
        return *this;
    }

    double value(const VectorCRef& x) const override
    {
        double v = constant_;
        for (const auto& t : linear_)
            v += t.coeff * x[t.index];
        for (const auto& t : logs_) {
            const double arg = 1.0 + t.scale * x[t.index];
            if (!(arg > 0.0))
                return std::numeric_limits<double>::infinity();
            v += t.coeff * std::log(arg);
        }
        for (const auto& t : squares_) {
            double s = 0.0;
            for (const auto& [i, a] : t.terms)
                s += a * x[i];
            v += t.coeff * s * s;
        }
        for (const auto& t : norms_)
            v += t.coeff * x.segment(t.offset, t.length).squaredNorm();
        for (const auto& t : projections2_) {
            const double s = t.p.dot(x.segment(t.offset, t.p.size()));
            v += t.coeff * s * s;
        }
        for (const auto& t : projections_)
            v += t.coeff * t.p.dot(x.segment(t.offset, t.p.size()));
        return v;
    }

    void add_gradient(const VectorCRef& x, double w, Eigen::Ref<Vector> g) const override
    {
        for (const auto& t : linear_)
            g[t.index] += w * t.coeff;
        for (const auto& t : logs_)
            g[t.index] += w * t.coeff * t.scale / (1.0 + t.scale * x[t.index]);
        for (const auto& t : squares_) {
            double s = 0.0;
            for (const auto& [i, a] : t.terms)
                s += a * x[i];
            for (const auto& [i, a] : t.terms)
                g[i] += w * 2.0 * t.coeff * s * a;
        }
        for (const auto& t : norms_)
            g.segment(t.offset, t.length) += (w * 2.0 * t.coeff) * x.segment(t.offset, t.length);
        for (const auto& t : projections2_) {
            const double s = t.p.dot(x.segment(t.offset, t.p.size()));
            g.segment(t.offset, t.p.size()) += (w * 2.0 * t.coeff * s) * t.p;
        }
        for (const auto& t : projections_)
            g.segment(t.offset, t.p.size()) += (w * t.coeff) * t.p;
    }

    void add_hessian(const VectorCRef& x, double w, Eigen::Ref<Matrix> h) const override
    {
        for (const auto& t : logs_) {
            const double arg = 1.0 + t.scale * x[t.index];
            h(t.index, t.index) -= w * t.coeff * t.scale * t.scale / (arg * arg);
        }
        for (const auto& t : squares_)
            for (const auto& [i, a] : t.terms)
                for (const auto& [j, b] : t.terms)
                    h(i, j) += w * 2.0 * t.coeff * a * b;
        for (const auto& t : norms_)
            h.diagonal().segment(t.offset, t.length).array() += w * 2.0 * t.coeff;
        for (const auto& t : projections2_) {
            const auto n = t.p.size();
            h.block(t.offset, t.offset, n, n).noalias() += (w * 2.0 * t.coeff) * t.p * t.p.transpose();
        }
    }

private:
    struct Linear { int index; double coeff; };
    struct Log { int index; double coeff; double scale; };
    struct Square { std::vector<std::pair<int, double>> terms; double coeff; };
    struct Norm { int offset; int length; double coeff; };
    struct Projection { int offset; Vector p; double coeff; };

    void touch(int i)
    {
        const auto it = std::lower_bound(support_.begin(), support_.end(), i);
        if (it == support_.end() || *it != i)
            support_.insert(it, i);
    }
    void touch_block(int offset, int length)
    {
        for (int i = 0; i < length; ++i)
            touch(offset + i);
    }

    double constant_ = 0.0;
    std::vector<Linear> linear_;
    std::vector<Log> logs_;
    std::vector<Square> squares_;
    std::vector<Norm> norms_;
    std::vector<Projection> projections2_;
    std::vector<Projection> projections_;
};

/// g(x) <= 0 with a unique human-readable label. `scale` is the natural
/// magnitude of g used when reporting primal residuals.
struct Constraint {
    std::string label;
    std::shared_ptr<const SmoothFunction> fn;
    double scale = 1.0;
};

/// minimize f0(x) subject to g_i(x) <= 0, every f0 and g_i convex.
struct ConvexProgram {
    int dimension = 0;
    std::shared_ptr<const SmoothFunction> objective;
    std::vector<Constraint> constraints;
    std::optional<Vector> start;

    void add(std::string label, std::shared_ptr<const SmoothFunction> fn, double scale = 1.0)
    {
        constraints.push_back({std::move(label), std::move(fn), scale});
    }
};

enum class SolveStatus { converged, max_iter, infeasible, numerical_failure };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

struct KktResiduals {
    double stationarity = 0.0;    // ||grad f0 + sum lambda_i grad g_i||_inf
    double primal = 0.0;          // max(0, max g_i / scale_i)
    double complementarity = 0.0; // max |lambda_i g_i|
    double min_dual = 0.0;        // min lambda_i

    bool within(double tol) const
    {
        return stationarity <= tol && primal <= tol && complementarity <= tol && min_dual >= -tol;
    }
};

struct SolverOptions {
    double t0 = 1.0;
    double mu = 10.0;
    double newton_tol = 1e-9;     // on decrement^2 / 2
    double armijo_alpha = 0.01;
    double armijo_beta = 0.5;
    double regularization = 1e-10; // relative to each Hessian diagonal entry
    double regularization_growth = 10.0;
    int max_regularizations = 5;
    double gap_tol = 1e-8;        // stop when m/t < gap_tol * (1 + |f0|)
    double kkt_tol = 1e-6;
    int max_newton_steps = 200;   // per centering
    int max_outer = 60;
    int max_polish_steps = 20;
    std::ostream* trace = nullptr;
};

struct SolveResult {
    Vector x;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double t = 0.0;
    Vector duals;
    KktResiduals kkt;
    int outer_iterations = 0;
    int newton_iterations = 0;
    int phase1_newton_iterations = 0;
    SolveStatus status = SolveStatus::numerical_failure;
    std::vector<double> outer_objectives; // f0 after each centering
    double phase1_slack = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> violated; // labels at the phase-I optimum when infeasible
    std::string message;
};

inline KktResiduals kkt_residual(const ConvexProgram& p, const VectorCRef& x, const VectorCRef& duals)
{
    if (x.size() != p.dimension || duals.size() != static_cast<Eigen::Index>(p.constraints.size()))
        throw std::invalid_argument("kkt_residual: dimension mismatch");
    Vector g = Vector::Zero(p.dimension);
    p.objective->add_gradient(x, 1.0, g);
    KktResiduals r;
    r.min_dual = p.constraints.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        const double lambda = duals[static_cast<Eigen::Index>(i)];
        const double v = c.fn->value(x);
        c.fn->add_gradient(x, lambda, g);
        r.primal = std::max(r.primal, v / c.scale);
        r.complementarity = std::max(r.complementarity, std::abs(lambda * v));
        r.min_dual = std::min(r.min_dual, lambda);
    }
    r.stationarity = g.lpNorm<Eigen::Infinity>();
    return r;
}

namespace detail {

// Phase-I pieces: lifted variable (x, s).
class LiftedConstraint final : public SmoothFunction {
public:
    LiftedConstraint(std::shared_ptr<const SmoothFunction> g, int n) : g_(std::move(g)), n_(n)
    {
        support_ = g_->support();
        if (support_.empty())
            for (int i = 0; i < n; ++i)
                support_.push_back(i);
        support_.push_back(n);
    }
    double value(const VectorCRef& x) const override { return g_->value(x.head(n_)) - x[n_]; }
    void add_gradient(const VectorCRef& x, double w, Eigen::Ref<Vector> g) const override
    {
        g_->add_gradient(x.head(n_), w, g.head(n_));
        g[n_] -= w;
    }
    void add_hessian(const VectorCRef& x, double w, Eigen::Ref<Matrix> h) const override
    {
        g_->add_hessian(x.head(n_), w, h.topLeftCorner(n_, n_));
    }

private:
    std::shared_ptr<const SmoothFunction> g_;
    int n_;
};

class BarrierSolver {
public:
    BarrierSolver(const ConvexProgram& p, const SolverOptions& o) : p_(p), o_(o), n_(p.dimension)
    {
        grad_.resize(n_);
        hess_.resize(n_, n_);
        tmp_.resize(n_);
        dx_.resize(n_);
        supports_.reserve(p.constraints.size());
        for (const auto& c : p.constraints) {
            std::vector<int> s = c.fn->support();
            if (s.empty())
                for (int i = 0; i < n_; ++i)
                    s.push_back(i);
            supports_.push_back(std::move(s));
        }
    }

    // max_i g_i(x); +inf on non-finite values.
    double max_constraint(const Vector& x) const
    {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& c : p_.constraints) {
            const double v = c.fn->value(x);
            if (!std::isfinite(v))
                return std::numeric_limits<double>::infinity();
            m = std::max(m, v);
        }
        return m;
    }

    // t f0 - sum log(-g_i), +inf outside the domain.
    double barrier_value(const Vector& x, double t) const
    {
        const double f = p_.objective->value(x);
        if (!std::isfinite(f))
            return std::numeric_limits<double>::infinity();
        double phi = t * f;
        for (const auto& c : p_.constraints) {
            const double v = c.fn->value(x);
            if (!(v < 0.0) || !std::isfinite(v))
                return std::numeric_limits<double>::infinity();
            phi -= std::log(-v);
        }
        return phi;
    }

    // Assembles gradient/Hessian of the barrier function at x.
    bool assemble(const Vector& x, double t)
    {
        grad_.setZero();
        hess_.setZero();
        p_.objective->add_gradient(x, t, grad_);
        p_.objective->add_hessian(x, t, hess_);
        for (std::size_t i = 0; i < p_.constraints.size(); ++i) {
            const auto& fn = *p_.constraints[i].fn;
            const double v = fn.value(x);
            if (!(v < 0.0) || !std::isfinite(v))
                return false;
            const auto& sup = supports_[i];
            for (int j : sup)
                tmp_[j] = 0.0;
            fn.add_gradient(x, 1.0, tmp_);
            const double inv = -1.0 / v;
            for (int a : sup) {
                const double ga = tmp_[a] * inv;
                grad_[a] += tmp_[a] * inv;
                if (ga == 0.0)
                    continue;
                for (int b : sup)
                    hess_(a, b) += ga * tmp_[b] * inv;
            }
            fn.add_hessian(x, inv, hess_);
        }
        return grad_.allFinite() && hess_.allFinite();
    }

    // Solves (H + reg I) dx = -grad. Returns false if every regularization fails.
    bool newton_direction()
    {
        // First try the exact system; then add a shift proportional to each
        // diagonal entry (variables are scaled very differently, so a shift
        // relative to the largest entry would swamp the weakly curved ones).
        const Vector diag = hess_.diagonal().cwiseAbs().cwiseMax(1e-300);
        double reg = 0.0;
        for (int attempt = 0; attempt <= o_.max_regularizations + 1; ++attempt) {
            Matrix h = hess_;
            h.diagonal() += reg * diag + Vector::Constant(h.rows(), reg * 1e-12);
            Eigen::LLT<Matrix> llt(h);
            if (llt.info() == Eigen::Success) {
                dx_ = llt.solve(-grad_);
                dx_ += llt.solve(-grad_ - hess_ * dx_); // one step of iterative refinement
                if (dx_.allFinite())
                    return true;
            }
            reg = reg == 0.0 ? o_.regularization : reg * o_.regularization_growth;
        }
        return false;
    }

    enum class StepResult { centered, stepped, stalled, failed };

    // With `force`, the step is taken even when the decrement test passes.
    StepResult newton_step(Vector& x, double t, double& decrement2, bool force = false)
    {
        if (!assemble(x, t) || !newton_direction())
            return StepResult::failed;
        const double slope = grad_.dot(dx_);
        decrement2 = -slope;
        const double phi0 = barrier_value(x, t);
        // At large t the decrease predicted by Newton or Armijo drops below the
        // rounding error of phi itself; tolerate that noise. (The resulting
        // suboptimality in f0 is ~noise / t.)
        const double noise = 1e-13 * (1.0 + std::abs(phi0));
        if (!force && decrement2 / 2.0 <= std::max(o_.newton_tol, noise))
            return StepResult::centered;
        double s = 1.0;
        Vector trial(n_);
        while (s > 1e-20) {
            trial = x + s * dx_;
            const double phi = barrier_value(trial, t);
            if (std::isfinite(phi) && phi <= phi0 + o_.armijo_alpha * s * slope + noise) {
                x = trial;
                return StepResult::stepped;
            }
            s *= o_.armijo_beta;
        }
        return StepResult::stalled;
    }

    const Vector& gradient() const { return grad_; }

private:
    const ConvexProgram& p_;
    const SolverOptions& o_;
    int n_;
    Vector grad_, tmp_, dx_;
    Matrix hess_;
    std::vector<std::vector<int>> supports_;
};

inline void check_labels(const ConvexProgram& p)
{
    std::set<std::string> seen;
    for (const auto& c : p.constraints)
        if (!seen.insert(c.label).second)
            throw std::invalid_argument("duplicate constraint label: " + c.label);
    if (!p.objective)
        throw std::invalid_argument("convex program has no objective");
}

// Core barrier loop from a strictly feasible x. `stop_early` ends the run as
// soon as it returns true after a Newton step (used by phase I).
// Barrier duals -1/(t g_i) inherit the rounding error of g_i, which is large
// relative to g_i itself once t is big. Re-estimates the multipliers of the
// nearly active constraints by least squares on the stationarity condition and
// keeps them when they certify the point better.
inline void refine_duals(const ConvexProgram& p, SolveResult& r, double t)
{
    const int n = p.dimension;
    std::vector<std::size_t> active;
    Vector g0 = Vector::Zero(n);
    p.objective->add_gradient(r.x, 1.0, g0);
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        if (r.duals[static_cast<Eigen::Index>(i)] * t >= 1e3)
            active.push_back(i);
        else
            p.constraints[i].fn->add_gradient(r.x, r.duals[static_cast<Eigen::Index>(i)], g0);
    }
    if (active.empty())
        return;
    Matrix jt = Matrix::Zero(n, static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c)
        p.constraints[active[c]].fn->add_gradient(r.x, 1.0, jt.col(static_cast<Eigen::Index>(c)));
    const Vector lambda = jt.completeOrthogonalDecomposition().solve(-g0);
    if (!lambda.allFinite())
        return;
    Vector duals = r.duals;
    for (std::size_t c = 0; c < active.size(); ++c)
        duals[static_cast<Eigen::Index>(active[c])] = lambda[static_cast<Eigen::Index>(c)];
    const KktResiduals k = kkt_residual(p, r.x, duals);
    const auto worst = [](const KktResiduals& v) {
        return std::max({v.stationarity, v.primal, v.complementarity, -v.min_dual});
    };
    if (worst(k) < worst(r.kkt)) {
        r.duals = duals;
        r.kkt = k;
    }
}

inline SolveResult run_barrier(const ConvexProgram& p, Vector x, const SolverOptions& o,
                               const std::function<bool(const Vector&)>& stop_early = {})
{
    SolveResult r;
    BarrierSolver solver(p, o);
    const auto m = static_cast<double>(p.constraints.size());
    double t = o.t0;
    const auto fail = [&](SolveStatus st, std::string msg) {
        r.status = st;
        r.message = std::move(msg);
        r.x = x;
        r.t = t;
        r.objective = p.objective->value(x);
        return r;
    };

    for (int outer = 0; outer < o.max_outer; ++outer) {
        bool centered = false;
        for (int step = 0; step < o.max_newton_steps; ++step) {
            double dec2 = 0.0;
            const auto res = solver.newton_step(x, t, dec2);
            ++r.newton_iterations;
            if (o.trace)
                *o.trace << "newton outer=" << outer << " step=" << step << " t=" << t
                         << " f0=" << p.objective->value(x) << " dec2=" << dec2 << '\n';
            if (res == BarrierSolver::StepResult::failed)
                return fail(SolveStatus::numerical_failure, "singular Newton system or non-finite evaluation");
            if (stop_early && stop_early(x)) {
                r.status = SolveStatus::converged;
                r.x = x;
                r.t = t;
                r.objective = p.objective->value(x);
                return r;
            }
            if (res == BarrierSolver::StepResult::centered || res == BarrierSolver::StepResult::stalled) {
                centered = true;
                break;
            }
        }
        r.outer_iterations = outer + 1;
        if (!centered)
            return fail(SolveStatus::max_iter, "centering did not converge");
        const double f = p.objective->value(x);
        r.outer_objectives.push_back(f);
        if (o.trace)
            *o.trace << "center outer=" << outer << " t=" << t << " f0=" << f << " gap=" << m / t << '\n';
        if (m == 0.0 || m / t < o.gap_tol * (1.0 + std::abs(f)))
            break;
        if (outer + 1 == o.max_outer)
            return fail(SolveStatus::max_iter, "barrier parameter limit reached");
        t *= o.mu;
    }

    r.x = x;
    r.t = t;
    r.objective = p.objective->value(x);
    r.duals.resize(static_cast<Eigen::Index>(p.constraints.size()));
    const auto refresh = [&] {
        for (std::size_t i = 0; i < p.constraints.size(); ++i)
            r.duals[static_cast<Eigen::Index>(i)] = -1.0 / (t * p.constraints[i].fn->value(r.x));
        r.kkt = kkt_residual(p, r.x, r.duals);
    };
    refresh();
    // Extra Newton steps at the final t tighten stationarity in the inf-norm.
    for (int k = 0; k < o.max_polish_steps && r.kkt.stationarity > 0.1 * o.kkt_tol; ++k) {
        double dec2 = 0.0;
        const auto res = solver.newton_step(r.x, t, dec2, true);
        if (res != BarrierSolver::StepResult::stepped)
            break;
        ++r.newton_iterations;
        refresh();
    }
    if (!r.kkt.within(o.kkt_tol))
        refine_duals(p, r, t);
    r.objective = p.objective->value(r.x);
    r.status = r.kkt.within(o.kkt_tol) ? SolveStatus::converged : SolveStatus::numerical_failure;
    if (r.status != SolveStatus::converged)
        r.message = "KKT residuals above tolerance";
    return r;
}

} // namespace detail

/// Phase I: minimizes s subject to g_i(x) <= s (and s >= -1). Returns a
/// strictly feasible x (status converged, phase1_slack < 0) or status
/// infeasible with the best slack found.
inline SolveResult phase1_feasible(const ConvexProgram& p, const SolverOptions& opts = {})
{
    detail::check_labels(p);
    const int n = p.dimension;
    Vector x0 = p.start.value_or(Vector::Zero(n));
    if (x0.size() != n)
        throw std::invalid_argument("phase1: start has wrong dimension");

    ConvexProgram lifted;
    lifted.dimension = n + 1;
    auto obj = std::make_shared<CompositeFunction>();
    obj->linear(n, 1.0);
    lifted.objective = obj;
    for (const auto& c : p.constraints)
        lifted.add(c.label, std::make_shared<detail::LiftedConstraint>(c.fn, n), c.scale);
    auto floor = std::make_shared<CompositeFunction>();
    floor->linear(n, -1.0).constant(-1.0);
    lifted.add("phase1_floor", floor);
    // Keeps the centering problems bounded when the feasible set is not.
    const double radius2 = 1e4 * std::max(1.0, x0.squaredNorm());
    auto ball = std::make_shared<CompositeFunction>();
    ball->block_norm2(0, n, 1.0).projection(0, -2.0 * x0, 1.0).constant(x0.squaredNorm() - radius2);
    lifted.add("phase1_radius", ball, radius2);

    SolveResult out;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : p.constraints) {
        const double v = c.fn->value(x0);
        if (!std::isfinite(v)) {
            out.status = SolveStatus::numerical_failure;
            out.message = "non-finite constraint value at phase-I start (" + c.label + ")";
            out.x = x0;
            return out;
        }
        worst = std::max(worst, v);
    }
    if (p.constraints.empty() || worst < 0.0) {
        out.status = SolveStatus::converged;
        out.x = x0;
        out.phase1_slack = p.constraints.empty() ? -1.0 : worst;
        return out;
    }

    Vector z(n + 1);
    z.head(n) = x0;
    z[n] = worst + std::max(1.0, 0.1 * std::abs(worst));

    SolverOptions o = opts;
    o.gap_tol = std::min(o.gap_tol, 1e-9);
    o.trace = opts.trace;
    const auto feasible = [n](const Vector& v) { return v[n] < 0.0; };
    SolveResult r = detail::run_barrier(lifted, z, o, feasible);
    out.newton_iterations = r.newton_iterations;
    out.phase1_newton_iterations = r.newton_iterations;
    out.outer_iterations = r.outer_iterations;
    out.x = r.x.head(n);
    out.phase1_slack = r.x[n];
    if (r.x[n] < 0.0 && (r.status == SolveStatus::converged || r.status == SolveStatus::numerical_failure)) {
        double check = -std::numeric_limits<double>::infinity();
        for (const auto& c : p.constraints)
            check = std::max(check, c.fn->value(out.x));
        if (check < 0.0) {
            out.status = SolveStatus::converged;
            return out;
        }
    }
    if (r.status == SolveStatus::max_iter) {
        out.status = SolveStatus::max_iter;
        out.message = "phase I did not converge";
        return out;
    }
    out.status = SolveStatus::infeasible;
    const double s = r.x[n];
    for (const auto& c : p.constraints)
        if (c.fn->value(out.x) >= std::min(0.0, s) - 1e-9 * (1.0 + std::abs(s)))
            out.violated.push_back(c.label);
    out.message = "no strictly feasible point (phase-I slack " + std::to_string(s) + ")";
    return out;
}

/// Two-phase log-barrier interior-point method.
inline SolveResult solve_barrier(const ConvexProgram& p, const SolverOptions& opts = {})
{
    detail::check_labels(p);
    Vector x = p.start.value_or(Vector::Zero(p.dimension));
    int phase1_steps = 0;
    double phase1_slack = std::numeric_limits<double>::quiet_NaN();
    bool strictly_feasible = true;
    for (const auto& c : p.constraints) {
        const double v = c.fn->value(x);
        if (!(v < 0.0) || !std::isfinite(v)) {
            strictly_feasible = false;
            break;
        }
    }
    if (!strictly_feasible) {
        SolveResult ph = phase1_feasible(p, opts);
        if (ph.status != SolveStatus::converged) {
            if (ph.status == SolveStatus::infeasible || ph.status == SolveStatus::max_iter)
                ph.status = SolveStatus::infeasible;
            return ph;
        }
        x = ph.x;
        phase1_steps = ph.newton_iterations;
        phase1_slack = ph.phase1_slack;
    }
    SolveResult r = detail::run_barrier(p, x, opts);
    r.phase1_newton_iterations = phase1_steps;
    r.phase1_slack = phase1_slack;
    return r;
}

} // namespace semopt

#endif // SEMOPT_CONVEX_CORE_HPP
