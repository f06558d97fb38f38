#ifndef QMIRROR_WIGNER_HPP
#define QMIRROR_WIGNER_HPP

// Phase-space evolution of the mirror's reduced state,
//   dW/dt = -(p/M) dW/dx + M W_ren^2 x dW/dp + D_p d^2W/dp^2
//           + C d^2W/dxdp + 2 gamma d/dp (p W),
// on a fixed rectangular grid. Operator splitting in palindromic order
// x(h/2) p(h/2) [diffusion+drift](h) p(h/2) x(h/2); the advection shears are
// conservative semi-Lagrangian remaps (quintic interpolation of the primitive
// function, exact mass bookkeeping with outflow tracked), the middle step is
// a flux-form explicit update with midpoint time stepping and internal
// subcycling. All coefficients are spatially constant, so every remap line
// shifts rigidly and mass is conserved to round-off away from the boundary.

#include <functional>
#include "qmirror/coefficients.hpp"

namespace qmirror {

struct WignerGrid {
    double x_min, x_max, p_min, p_max;
    int nx, np;

    double dx() const { return (x_max - x_min) / nx; }
    double dp() const { return (p_max - p_min) / np; }
    double x(int i) const { return x_min + (i + 0.5) * dx(); } // cell centers
    double p(int j) const { return p_min + (j + 0.5) * dp(); }

    static WignerGrid from(const GridSpec& g) {
        return {g.x_min, g.x_max, g.p_min, g.p_max, g.nx, g.np};
    }
};

struct WignerState {
    WignerGrid grid;
    std::vector<double> w; // row-major [i * np + j]
    double time = 0;
    double mass_lost = 0;  // advection outflow through the open boundary

    double& at(int i, int j) { return w[std::size_t(i) * grid.np + j]; }
    double at(int i, int j) const { return w[std::size_t(i) * grid.np + j]; }
};

struct CatStateSpec {
    double x0 = 0;    // position separation
    double p0 = 0;    // momentum separation
    double delta = 1; // packet width
};

// Instantaneous generator values consumed by the stepper (already mapped to
// the physical convention, see coefficients.hpp).
struct StepCoeffs {
    double mass = 1;
    double omega_ren_sq = 0; // M W_ren^2 x restoring gradient
    double d_p = 0;          // momentum diffusion, >= 0 in equilibrium
    double d_xp = 0;         // cross diffusion
    double gamma = 0;        // drift rate, > 0 damps
};

struct Observables {
    double norm, mean_x, mean_p, var_x, var_p, cov_xp;
    double energy;             // <p^2/2M + M W^2 x^2 / 2> (bare trap frequency)
    double visibility_raw;     // |proj of p-marginal at wavenumber x0/hbar|
    double negativity_volume;  // integral of max(0, -W)
    double boundary_mass;      // |W| mass in the outer two-cell band
    double min_w;
};

WignerState cat_state(const CatStateSpec& spec, const WignerGrid& grid, double hbar);

Observables observables(const WignerState& s, double mass, double trap_omega,
                        double hbar, double vis_x0);

// One operator-split step. Throws PhysicsError naming the violated bound if
// dt breaks the advection CFL or the diffusion stability limit.
void step(WignerState& s, const StepCoeffs& c, double dt, double hbar,
          bool parallel = true);

struct EvolveOptions {
    double horizon = 0;
    double dt = 0;
    int observe_every = 16;
    double vis_x0 = 0;       // projection wavenumber for the visibility
    double trap_omega = 0;   // for the energy observable
    double boundary_abort = 1e-6;
};

struct SeriesPoint {
    double t;
    Observables obs;
};

using CoeffProvider = std::function<StepCoeffs(double)>;

// Fixed-step evolution with observer snapshots every observe_every steps;
// coefficients are evaluated at the step midpoint. Aborts if the boundary
// band accumulates more than boundary_abort of the mass.
std::vector<SeriesPoint> evolve(WignerState& s, const CoeffProvider& coeffs,
                                const EvolveOptions& opt, double hbar,
                                bool parallel = true);

// Map a coefficient trace to stepper inputs: D_p = -hbar D_PP,
// C = hbar D_XP, gamma = -Gamma, dW2^2_phys = -dW2^2. "stationary" takes the
// spectral stationary values plus the end-of-trace plateau for the
// whole-spectrum quantities.
StepCoeffs stationary_step_coeffs(const CoefficientTrace& tr, const Config& cfg);
StepCoeffs trace_step_coeffs(const CoefficientTrace& tr, const Config& cfg, double t);

struct DecoherenceReport {
    std::vector<double> t, visibility; // normalized to the initial value
    double t_xx_fitted = 0;
    double t_xx_predicted = 0; // hbar / (|D_PP^s| x0^2)
    double t_xp_predicted = 0; // hbar / (|D_XP^s| x0 p0), 0 when p0 = 0
    double t_relax = 0;        // 1 / gamma_drift
    double ratio_fitted = 0;     // t_xx_fitted / t_relax
    double ratio_structural = 0; // hbar / (M W z(W) x0^2), the FDR-collapsed ratio
};

// Exponential fit to the per-period peaks of the visibility series (the cat
// rotates, so the raw visibility oscillates; its period maxima decay
// monotonically). Throws PhysicsError("insufficient decay ...") if the series
// never reaches 1/e of the initial visibility.
DecoherenceReport decoherence_report(const std::vector<SeriesPoint>& series,
                                     const CoefficientTrace& tr,
                                     const CatStateSpec& spec, const Config& cfg);

} // namespace qmirror

#endif
