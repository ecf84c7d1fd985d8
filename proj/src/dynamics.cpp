#include "phyllo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace phyllo {

void ModelParams::validate() const {
    if (!(mu > 0.0 && mu < 1.0)) throw InvalidArgument("params.mu must lie in (0, 1)");
    if (!(beta >= 0.0)) throw InvalidArgument("params.beta must be non-negative");
    if (!(dt > 0.0)) throw InvalidArgument("params.dt must be positive");
    if (!(solver_tol > 0.0)) throw InvalidArgument("params.solver_tol must be positive");
    if (max_iter < 1) throw InvalidArgument("params.max_iter must be at least 1");
}

double growth_rate(double mu, double k) {
    const double s = 1.0 - k * k;
    return mu - s * s;
}

namespace {

// Grid-level operator data shared by the energy and its derivatives.
struct Operators {
    GridSpec grid;
    RadialStencil lap;
    RadialStencil der;
    Eigen::ArrayXd weights;
    Eigen::ArrayXd inv_r;   // per grid ring
    Eigen::ArrayXd inv_r2;  // per grid ring

    explicit Operators(const GridSpec& g)
        : grid(g), lap(radial_laplacian_stencil(g)), der(radial_derivative_stencil(g)), weights(ring_weights(g)),
          inv_r(g.n_r), inv_r2(g.n_r) {
        for (Index i = 0; i < g.n_r; ++i) {
            inv_r(i) = 1.0 / g.radius(i);
            inv_r2(i) = inv_r(i) * inv_r(i);
        }
    }

    RealRows per_ring(const RealRows& rows, const Eigen::ArrayXd& factor) const {
        RealRows out = rows;
        for (Index i = 0; i < out.rows(); ++i) out.row(i) *= factor(i);
        return out;
    }

    // (1 + ∇²)u in physical space.
    RealRows one_plus_laplacian(const ScalarField& u) const {
        return u.values + apply_radial(lap, u.values, u.ghost) +
               per_ring(angular_second_derivative(u.values), inv_r2);
    }

    // Linear part of δE/δu in spectral form: −µû + W⁻¹MᵀW(Mû), M = 1 + ∇².
    // `uh` carries n_r + 1 rows (the last is the ghost ring).
    Spectrum linear_part(const Spectrum& uh, double mu) const {
        const Index n = grid.n_r;
        const Index nm = uh.cols();
        Spectrum grid_rows = uh.topRows(n);
        Row<Complex> ghost = uh.row(n);
        Spectrum mu_h = grid_rows + apply_radial(lap, grid_rows, ghost);
        for (Index i = 0; i < n; ++i)
            for (Index m = 0; m < nm; ++m) mu_h(i, m) -= double(m) * double(m) * inv_r2(i) * grid_rows(i, m);
        Spectrum out = mu_h + apply_radial_adjoint(lap, weights, mu_h);
        for (Index i = 0; i < n; ++i)
            for (Index m = 0; m < nm; ++m) out(i, m) -= double(m) * double(m) * inv_r2(i) * mu_h(i, m);
        out -= mu * grid_rows;
        return out;
    }

    struct Gradient {
        RealRows r;
        RealRows t;
    };

    Gradient gradient(const RealRows& values, const Row<double>& ghost) const {
        return {apply_radial(der, values, ghost), per_ring(angular_derivative(values), inv_r)};
    }

    // Nonlinear part of the discrete gradient between (u, Gu) and (v, Gv):
    // the averaged quartic quotient plus the symmetrised cubic β-term.
    Spectrum nonlinear_part(const RealRows& u, const Gradient& gu, const RealRows& v, const Gradient& gv,
                            double beta) const {
        const double c = beta / 9.0;
        RealRows local = 0.25 * (u.square() * u + u.square() * v + u * v.square() + v.square() * v);
        if (beta != 0.0) {
            local -= c * (gv.r.square() + gv.t.square() + gu.r * gv.r + gu.t * gv.t + gu.r.square() + gu.t.square());
            const RealRows p_r = 2.0 * v * gv.r + u * gv.r + v * gu.r + 2.0 * u * gu.r;
            const RealRows p_t = 2.0 * v * gv.t + u * gv.t + v * gu.t + 2.0 * u * gu.t;
            local -= c * apply_radial_adjoint(der, weights, p_r);
            Spectrum out = forward_rings(local);
            Spectrum pt_h = forward_rings(p_t);
            const Index nm = out.cols();
            for (Index i = 0; i < out.rows(); ++i)
                for (Index m = 0; m + 1 < nm; ++m) out(i, m) += c * inv_r(i) * Complex(0.0, double(m)) * pt_h(i, m);
            return out;
        }
        return forward_rings(local);
    }
};

ScalarField average(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    out.values = 0.5 * (a.values + b.values);
    out.ghost = 0.5 * (a.ghost + b.ghost);
    return out;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw InvalidArgument("fields live on different grids");
}

}  // namespace

ScalarField energy_density(const ScalarField& u, const ModelParams& p) {
    const Operators ops(u.grid);
    const RealRows mu_u = ops.one_plus_laplacian(u);
    const auto g = ops.gradient(u.values, u.ghost);
    ScalarField out(u.grid);
    const RealRows& x = u.values;
    out.values = -0.5 * p.mu * x.square() + 0.5 * mu_u.square() - (p.beta / 3.0) * x * (g.r.square() + g.t.square()) +
                 0.25 * x.square().square();
    return out;
}

double energy(const ScalarField& u, const ModelParams& p) { return integrate(energy_density(u, p)); }

ScalarField variational_derivative(const ScalarField& u, const ModelParams& p) {
    return discrete_gradient(u, u, p);
}

ScalarField discrete_gradient(const ScalarField& u_old, const ScalarField& u_new, const ModelParams& p) {
    require_same_grid(u_old, u_new);
    const Operators ops(u_old.grid);
    const ScalarField mid = average(u_old, u_new);
    Spectrum total = ops.linear_part(to_spectrum(mid), p.mu);
    total += ops.nonlinear_part(u_old.values, ops.gradient(u_old.values, u_old.ghost), u_new.values,
                                ops.gradient(u_new.values, u_new.ghost), p.beta);
    ScalarField out(u_old.grid);
    out.values = inverse_rings(total, u_old.grid.n_theta);
    return out;
}

// Pentadiagonal matrix over the free rings of one angular mode, stored by
// diagonals (column offset −2..+2), with its in-place LU factors.
struct Stepper::Band {
    Eigen::Array<double, Eigen::Dynamic, 5, Eigen::RowMajor> matrix;
    Eigen::Array<double, Eigen::Dynamic, 5, Eigen::RowMajor> lu;

    void factor() {
        lu = matrix;
        const Index n = lu.rows();
        for (Index k = 0; k < n; ++k) {
            const double pivot = lu(k, 2);
            for (Index i = k + 1; i <= std::min(k + 2, n - 1); ++i) {
                const double f = lu(i, k - i + 2) / pivot;
                lu(i, k - i + 2) = f;
                for (Index j = k + 1; j <= std::min(k + 2, n - 1); ++j) lu(i, j - i + 2) -= f * lu(k, j - k + 2);
            }
        }
    }

    template <typename Col>
    void solve(Col&& x) const {
        const Index n = lu.rows();
        for (Index i = 0; i < n; ++i)
            for (Index k = std::max<Index>(0, i - 2); k < i; ++k) x(i) -= lu(i, k - i + 2) * x(k);
        for (Index i = n - 1; i >= 0; --i) {
            for (Index j = i + 1; j <= std::min(i + 2, n - 1); ++j) x(i) -= lu(i, j - i + 2) * x(j);
            x(i) /= lu(i, 2);
        }
    }

    template <typename Col>
    auto multiply(const Col& x) const {
        const Index n = matrix.rows();
        Eigen::Array<Complex, Eigen::Dynamic, 1> y = Eigen::Array<Complex, Eigen::Dynamic, 1>::Zero(n);
        for (Index i = 0; i < n; ++i)
            for (Index j = std::max<Index>(0, i - 2); j <= std::min(i + 2, n - 1); ++j) y(i) += matrix(i, j - i + 2) * x(j);
        return y;
    }
};

Stepper::Stepper(const GridSpec& grid, const ModelParams& params) : grid_(grid), params_(params) {
    params_.validate();
    const Operators ops(grid);
    const Index n = grid.n_r;
    const Index nf = grid.free_rings();
    const Index nm = grid.n_modes();
    bands_.resize(std::size_t(nm));
    // M = 1 + ∇² for mode m: row i couples columns i-1, i, i+1.
    auto m_entry = [&](Index i, Index col, double m2) -> double {
        if (col == i - 1) return ops.lap.lower(i);
        if (col == i + 1) return ops.lap.upper(i);
        if (col == i) return 1.0 + ops.lap.diag(i) - m2 * ops.inv_r2(i);
        return 0.0;
    };
    for (Index m = 0; m < nm; ++m) {
        const double m2 = double(m) * double(m);
        Band& b = bands_[std::size_t(m)];
        b.matrix = decltype(b.matrix)::Zero(nf, 5);
        for (Index k = 0; k < nf; ++k) {
            for (Index l = std::max<Index>(0, k - 2); l <= std::min(k + 2, nf - 1); ++l) {
                double h = 0.0;
                for (Index i = std::max<Index>(0, std::max(k, l) - 1); i <= std::min(n - 1, std::min(k, l) + 1); ++i)
                    h += ops.weights(i) * m_entry(i, k, m2) * m_entry(i, l, m2);
                h /= ops.weights(k);
                if (k == l) h += -params_.mu;
                b.matrix(k, l - k + 2) = 0.5 * params_.dt * h + (k == l ? 1.0 : 0.0);
            }
        }
        b.factor();
    }
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

StepResult Stepper::step(const ScalarField& u) const {
    if (!(u.grid == grid_)) throw InvalidArgument("field grid does not match the stepper grid");
    const Operators ops(grid_);
    const Index nf = grid_.free_rings();
    const Index nm = grid_.n_modes();
    const Index nt = grid_.n_theta;
    const double dt = params_.dt;

    const Spectrum u_h = to_spectrum(u);
    const Spectrum lin_old = ops.linear_part(u_h, params_.mu);
    const auto gu = ops.gradient(u.values, u.ghost);

    Spectrum delta = Spectrum::Zero(grid_.n_r, nm);
    Spectrum next(grid_.n_r, nm);
    Spectrum dtheta_h(grid_.n_r, nm);
    double omega = 1.0;
    double last_residual = std::numeric_limits<double>::infinity();
    int stalls = 0;

    for (int iter = 0; iter <= params_.max_iter; ++iter) {
        const RealRows delta_phys = inverse_rings(delta, nt);
        for (Index m = 0; m < nm; ++m) dtheta_h.col(m) = delta.col(m) * Complex(0.0, double(m));
        dtheta_h.col(nm - 1).setZero();
        RealRows v = u.values + delta_phys;
        Operators::Gradient gv{apply_radial(ops.der, v, u.ghost),
                               gu.t + ops.per_ring(inverse_rings(dtheta_h, nt), ops.inv_r)};
        const Spectrum nonlinear = ops.nonlinear_part(u.values, gu, v, gv, params_.beta);

        // rhs = −dt·(linear part at u_old + nonlinear part); residual = (Pδ − rhs)/dt.
        Spectrum residual_h = Spectrum::Zero(grid_.n_r, nm);
        for (Index m = 0; m < nm; ++m) {
            const Band& b = bands_[std::size_t(m)];
            Eigen::Array<Complex, Eigen::Dynamic, 1> rhs =
                -dt * (lin_old.col(m).head(nf) + nonlinear.col(m).head(nf));
            const auto p_delta = b.multiply(delta.col(m).head(nf));
            residual_h.col(m).head(nf) = (p_delta - rhs) / dt;
            b.solve(rhs);
            next.col(m).head(nf) = rhs;
        }
        const double residual = inverse_rings(residual_h, nt).topRows(nf).abs().maxCoeff();
        if (!std::isfinite(residual)) break;
        if (residual <= params_.solver_tol) {
            ScalarField out = u;
            out.values.topRows(nf) += delta_phys.topRows(nf);
            return {std::move(out), iter, residual};
        }
        if (residual > last_residual) {
            if (++stalls >= 3) omega = std::max(0.25, omega * 0.5);
        }
        last_residual = residual;
        if (iter == params_.max_iter) {
            throw NoConvergence("nonlinear solve did not converge in " + std::to_string(params_.max_iter) +
                                    " iterations (residual " + std::to_string(residual) + "); reduce params.dt",
                                iter, residual);
        }
        delta.topRows(nf) += omega * (next.topRows(nf) - delta.topRows(nf));
    }
    throw NoConvergence("nonlinear solve diverged; reduce params.dt", params_.max_iter,
                        std::numeric_limits<double>::infinity());
}

StepResult step(const ScalarField& u, const ModelParams& p) { return Stepper(u.grid, p).step(u); }

EvolveResult evolve(const ScalarField& u0, const ModelParams& p, double t_end, std::span<const Observer> observers,
                    const std::function<bool(const Snapshot&)>& stop) {
    p.validate();
    for (const auto& o : observers)
        if (o.stride == 0) throw InvalidArgument("observer stride must be at least 1");
    if (!u0.all_finite()) throw InvalidArgument("initial field contains non-finite values");

    constexpr int kMaxHalvings = 4;
    std::vector<std::unique_ptr<Stepper>> steppers(kMaxHalvings + 1);
    auto stepper_for = [&](int level) -> const Stepper& {
        auto& s = steppers[std::size_t(level)];
        if (!s) {
            ModelParams q = p;
            q.dt = p.dt / double(1 << level);
            s = std::make_unique<Stepper>(u0.grid, q);
        }
        return *s;
    };

    // Advance by dt/2^level, splitting further on failure.
    std::function<ScalarField(const ScalarField&, int, double)> advance = [&](const ScalarField& u, int level,
                                                                               double t) -> ScalarField {
        try {
            return stepper_for(level).step(u).field;
        } catch (const NoConvergence& e) {
            if (level == kMaxHalvings)
                throw NoConvergence(std::string(e.what()) + " at t = " + std::to_string(t), e.iterations(),
                                    e.residual(), t);
            const ScalarField half = advance(u, level + 1, t);
            return advance(half, level + 1, t + p.dt / double(2 << level));
        }
    };

    EvolveResult result{u0, {}, 0};
    double t = 0.0;
    double e = energy(result.field, p);
    result.trace.push_back({t, e});
    auto notify = [&](bool force) {
        const Snapshot snap{t, result.steps, result.field, e};
        for (const auto& o : observers)
            if (force || result.steps % o.stride == 0) o.callback(snap);
        return stop && stop(snap);
    };
    if (notify(true)) return result;

    const auto n_steps = std::size_t(std::llround(std::ceil(t_end / p.dt - 1e-9)));
    for (std::size_t s = 0; s < n_steps; ++s) {
        result.field = advance(result.field, 0, t);
        ++result.steps;
        t = double(result.steps) * p.dt;
        e = energy(result.field, p);
        result.trace.push_back({t, e});
        if (notify(false)) break;
    }
    return result;
}

}  // namespace phyllo
