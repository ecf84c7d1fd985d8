#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phyllo/grid.hpp"

namespace phyllo {

/// Control parameters of the gradient flow
///   ∂u/∂t = µu − (∇²+1)²u − (β/3)(|∇u|² + 2u∇²u) − u³
/// together with the numerical settings of the implicit stepper.
struct ModelParams {
    double mu = 1e-3;
    double beta = 3.0;
    double dt = 0.5;
    double solver_tol = 1e-10;  ///< max-norm of the nonlinear residual
    int max_iter = 100;

    void validate() const;
};

struct EnergySample {
    double t;
    double energy;
};
using EnergyTrace = std::vector<EnergySample>;

/// Pointwise integrand −(µ/2)u² + ½(u+∇²u)² − (β/3)u|∇u|² + ¼u⁴.
ScalarField energy_density(const ScalarField& u, const ModelParams& p);

/// E[u], the quadrature of energy_density.  The flow above is exactly −δE/δu.
double energy(const ScalarField& u, const ModelParams& p);

/// δE/δu with respect to the quadrature inner product, on every grid ring.
ScalarField variational_derivative(const ScalarField& u, const ModelParams& p);

/// Discrete variational derivative: satisfies
///   E[u_new] − E[u_old] = ⟨discrete_gradient(u_old, u_new), u_new − u_old⟩
/// exactly (up to rounding) when both fields share ghost data, and reduces
/// to variational_derivative when u_old == u_new.
ScalarField discrete_gradient(const ScalarField& u_old, const ScalarField& u_new, const ModelParams& p);

struct StepResult {
    ScalarField field;
    int iterations = 0;
    double residual = 0.0;
};

/// Implicit discrete-gradient stepper
///   (u_new − u_old)/dt = −discrete_gradient(u_old, u_new)
/// solved by fixed-point iteration preconditioned with the per-mode banded
/// inverse of I + (dt/2)·(linear part).  Pinned rings are left untouched.
///
/// Factorisations are built once per (grid, params) and reused across steps.
class Stepper {
public:
    Stepper(const GridSpec& grid, const ModelParams& params);
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;

    const GridSpec& grid() const noexcept { return grid_; }
    const ModelParams& params() const noexcept { return params_; }

    /// Throws NoConvergence when max_iter is reached.
    StepResult step(const ScalarField& u) const;

private:
    struct Band;
    GridSpec grid_;
    ModelParams params_;
    std::vector<Band> bands_;
};

/// One step with a throwaway Stepper.
StepResult step(const ScalarField& u, const ModelParams& p);

struct Snapshot {
    double t;
    std::size_t step_index;
    const ScalarField& field;
    double energy;
};

/// Called every `stride` accepted steps (and once at t = 0).
struct Observer {
    std::size_t stride = 1;
    std::function<void(const Snapshot&)> callback;
};

struct EvolveResult {
    ScalarField field;
    EnergyTrace trace;
    std::size_t steps = 0;
};

/// Integrates to t_end.  A step that fails to converge is retried as two
/// half steps (up to four halvings); persistent failure rethrows
/// NoConvergence carrying the failure time.  `stop` may end the run early.
EvolveResult evolve(const ScalarField& u0, const ModelParams& p, double t_end,
                    std::span<const Observer> observers = {},
                    const std::function<bool(const Snapshot&)>& stop = {});

/// Linear growth rate σ(k) = µ − (1 − k²)² of a plane wave e^{ik·x}.
double growth_rate(double mu, double k);

}  // namespace phyllo
