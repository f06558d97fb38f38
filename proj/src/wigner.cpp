#include "qmirror/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace qmirror {

namespace {

// Conservative shift of one grid line by sigma cells, vacuum outside.
// The primitive P_k = sum_{l<k} w_l is interpolated with a 6-point Lagrange
// stencil at the displaced cell faces; differencing the interpolated
// primitive conserves mass exactly up to what flows off the ends.
struct ShiftPlan {
    long k0;        // integer part of the shift
    double wgt[6];  // quintic weights at fractional offset
    bool identity;

    explicit ShiftPlan(double sigma) {
        identity = sigma == 0.0;
        const double fl = std::floor(sigma);
        k0 = static_cast<long>(fl);
        const double f = sigma - fl;   // in [0,1)
        const double u = 3.0 - f;      // position in the 6-node stencil 0..5
        for (int k = 0; k < 6; ++k) {
            double lk = 1.0;
            for (int l = 0; l < 6; ++l)
                if (l != k) lk *= (u - l) / double(k - l);
            wgt[k] = lk;
        }
    }
};

void shift_line(const double* in, double* out, long n, const ShiftPlan& plan,
                double* scratch, double& lost) {
    if (plan.identity) {
        std::memcpy(out, in, sizeof(double) * n);
        return;
    }
    // primitive on integer nodes, P[0..n]
    double* P = scratch;
    P[0] = 0.0;
    for (long k = 0; k < n; ++k) P[k + 1] = P[k] + in[k];
    const double total = P[n];

    auto Pat = [&](long idx) { // clamped primitive: vacuum outside
        if (idx <= 0) return 0.0;
        if (idx >= n) return total;
        return P[idx];
    };

    // face i of the new grid sits at old coordinate i - sigma, between
    // integer nodes; Q[i] = P(i - sigma).
    double prev = 0.0;
    double kept = 0.0;
    for (long i = 0; i <= n; ++i) {
        const long base = i - plan.k0 - 4; // stencil nodes base..base+5
        double q = 0.0;
        for (int k = 0; k < 6; ++k) q += plan.wgt[k] * Pat(base + k);
        if (i == 0) {
            prev = q;
            continue;
        }
        const double v = q - prev;
        out[i - 1] = v;
        kept += v;
        prev = q;
    }
    lost += total - kept;
}

struct FluxWork {
    std::vector<double> k1, tmp;
};

// Flux-form right-hand side of the diffusion + cross + drift part:
//   dW/dt = d/dp [ D_p dW/dp + (C/2) dW/dx + 2 gamma p W ] + d/dx [ (C/2) dW/dp ].
// Zero-flux boundary faces.
void diffusion_rhs(const WignerState& s, const StepCoeffs& c, const double* w,
                   double* rhs, bool parallel) {
    const int nx = s.grid.nx, np = s.grid.np;
    const double dx = s.grid.dx(), dp = s.grid.dp();
    const double idp = 1.0 / dp, idx = 1.0 / dx;

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < nx; ++i) {
        const double* wi = w + std::size_t(i) * np;
        const double* wim = w + std::size_t(std::max(i - 1, 0)) * np;
        const double* wip = w + std::size_t(std::min(i + 1, nx - 1)) * np;
        double* out = rhs + std::size_t(i) * np;

        // p-direction fluxes for this row
        double fp_prev = 0.0; // zero-flux at j = -1/2
        for (int j = 0; j < np; ++j) {
            double fp = 0.0;
            if (j + 1 < np) {
                const double dwdp = (wi[j + 1] - wi[j]) * idp;
                double dwdx = 0.0;
                if (c.d_xp != 0.0)
                    dwdx = 0.25 * idx * ((wip[j] + wip[j + 1]) - (wim[j] + wim[j + 1]));
                const double p_face = s.grid.p_min + (j + 1) * dp;
                const double wavg = 0.5 * (wi[j] + wi[j + 1]);
                fp = c.d_p * dwdp + 0.5 * c.d_xp * dwdx + 2.0 * c.gamma * p_face * wavg;
            }
            double fx_r = 0.0, fx_l = 0.0;
            if (c.d_xp != 0.0) {
                const double jm = j > 0 ? 1.0 : 0.0, jp = j + 1 < np ? 1.0 : 0.0;
                if (i + 1 < nx) {
                    const double a = jp ? (wi[j + 1] + wip[j + 1]) : (wi[j] + wip[j]);
                    const double b = jm ? (wi[j - 1] + wip[j - 1]) : (wi[j] + wip[j]);
                    fx_r = 0.5 * c.d_xp * 0.25 * idp * (a - b);
                }
                if (i > 0) {
                    const double a = jp ? (wi[j + 1] + wim[j + 1]) : (wi[j] + wim[j]);
                    const double b = jm ? (wi[j - 1] + wim[j - 1]) : (wi[j] + wim[j]);
                    fx_l = 0.5 * c.d_xp * 0.25 * idp * (a - b);
                }
            }
            out[j] = (fp - fp_prev) * idp + (fx_r - fx_l) * idx;
            fp_prev = fp;
        }
    }
}

void advect_x(WignerState& s, double dt, const StepCoeffs& c, bool parallel) {
    const int nx = s.grid.nx, np = s.grid.np;
    const double dx = s.grid.dx();
    double lost_total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : lost_total) if (parallel)
    for (int j = 0; j < np; ++j) {
        std::vector<double> line(nx), out(nx), scratch(nx + 1);
        for (int i = 0; i < nx; ++i) line[i] = s.at(i, j);
        const double sigma = s.grid.p(j) / c.mass * dt / dx;
        ShiftPlan plan(sigma);
        double lost = 0.0;
        shift_line(line.data(), out.data(), nx, plan, scratch.data(), lost);
        lost_total += lost;
        for (int i = 0; i < nx; ++i) s.at(i, j) = out[i];
    }
    s.mass_lost += lost_total * dx * s.grid.dp();
}

void advect_p(WignerState& s, double dt, const StepCoeffs& c, bool parallel) {
    const int nx = s.grid.nx, np = s.grid.np;
    const double dp = s.grid.dp();
    double lost_total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : lost_total) if (parallel)
    for (int i = 0; i < nx; ++i) {
        std::vector<double> out(np), scratch(np + 1);
        double* line = &s.w[std::size_t(i) * np];
        const double sigma = -c.mass * c.omega_ren_sq * s.grid.x(i) * dt / dp;
        ShiftPlan plan(sigma);
        double lost = 0.0;
        shift_line(line, out.data(), np, plan, scratch.data(), lost);
        lost_total += lost;
        std::memcpy(line, out.data(), sizeof(double) * np);
    }
    s.mass_lost += lost_total * s.grid.dx() * dp;
}

} // namespace

WignerState cat_state(const CatStateSpec& spec, const WignerGrid& grid, double hbar) {
    if (spec.delta <= 0) throw ConfigError("cat state: packet width must be positive");
    if (spec.x0 < 0 || spec.p0 < 0) throw ConfigError("cat state: separations must be >= 0");
    if (spec.x0 > 0 && 2.0 * pi * hbar / spec.x0 < 4.0 * grid.dp())
        throw PhysicsError("grid-underresolved: momentum fringe wavelength 2 pi hbar/x0 "
                           "spans fewer than 4 cells");
    if (spec.p0 > 0 && 2.0 * pi * hbar / spec.p0 < 4.0 * grid.dx())
        throw PhysicsError("grid-underresolved: position fringe wavelength 2 pi hbar/p0 "
                           "spans fewer than 4 cells");

    WignerState s;
    s.grid = grid;
    s.w.resize(std::size_t(grid.nx) * grid.np);

    const double d2 = spec.delta * spec.delta;
    const double h2 = hbar * hbar;
    auto lobe = [&](double x, double p, double cx, double cp) {
        const double ex = (x - cx) * (x - cx) / d2;
        const double ep = (p - cp) * (p - cp) * d2 / h2;
        return std::exp(-(ex + ep)) / (pi * hbar);
    };
    double mass = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        for (int j = 0; j < grid.np; ++j) {
            const double p = grid.p(j);
            double v = lobe(x, p, 0.5 * spec.x0, 0.5 * spec.p0) +
                       lobe(x, p, -0.5 * spec.x0, -0.5 * spec.p0) +
                       2.0 * lobe(x, p, 0.0, 0.0) *
                           std::cos((p * spec.x0 - spec.p0 * x) / hbar);
            v *= 0.5;
            s.at(i, j) = v;
            mass += v;
        }
    }
    mass *= grid.dx() * grid.dp();
    if (mass <= 0) throw PhysicsError("cat state: nonpositive norm on this grid");
    for (auto& v : s.w) v /= mass;
    return s;
}

Observables observables(const WignerState& s, double mass, double trap_omega,
                        double hbar, double vis_x0) {
    const auto& g = s.grid;
    const double cell = g.dx() * g.dp();
    Observables o{};
    o.min_w = s.w.empty() ? 0.0 : s.w[0];

    double n = 0, sx = 0, sp = 0, sxx = 0, spp = 0, sxp = 0, neg = 0;
    std::vector<double> pmarg(g.np, 0.0);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        for (int j = 0; j < g.np; ++j) {
            const double p = g.p(j);
            const double w = s.at(i, j);
            n += w;
            sx += w * x;
            sp += w * p;
            sxx += w * x * x;
            spp += w * p * p;
            sxp += w * x * p;
            if (w < 0) neg -= w;
            if (w < o.min_w) o.min_w = w;
            pmarg[j] += w;
        }
    }
    o.norm = n * cell;
    const double inv = n > 0 ? 1.0 / n : 0.0;
    o.mean_x = sx * inv;
    o.mean_p = sp * inv;
    o.var_x = sxx * inv - o.mean_x * o.mean_x;
    o.var_p = spp * inv - o.mean_p * o.mean_p;
    o.cov_xp = sxp * inv - o.mean_x * o.mean_p;
    o.energy = 0.5 * (spp * inv) / mass +
               0.5 * mass * trap_omega * trap_omega * (sxx * inv);
    o.negativity_volume = neg * cell;

    if (vis_x0 > 0) {
        cplx proj(0.0, 0.0);
        for (int j = 0; j < g.np; ++j)
            proj += pmarg[j] * std::polar(1.0, -g.p(j) * vis_x0 / hbar);
        o.visibility_raw = std::abs(proj) * g.dx() * g.dp();
    }

    // |W| mass in the outermost two-cell frame
    double bm = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.np; ++j)
            if (i < 2 || i >= g.nx - 2 || j < 2 || j >= g.np - 2)
                bm += std::abs(s.at(i, j));
    o.boundary_mass = bm * cell;
    return o;
}

void step(WignerState& s, const StepCoeffs& c, double dt, double hbar, bool parallel) {
    (void)hbar;
    const double p_max = std::max(std::abs(s.grid.p_min), std::abs(s.grid.p_max));
    if (p_max * dt / (c.mass * s.grid.dx()) >= 0.9)
        throw PhysicsError("stability violation: advection CFL |p|max dt/(M dx) >= 0.9");
    const double d_eff = 0.5 * (c.d_p + std::hypot(c.d_p, c.d_xp));
    if (d_eff * dt / (s.grid.dp() * s.grid.dp()) >= 0.45)
        throw PhysicsError("stability violation: diffusion bound D_eff dt/dp^2 >= 0.45");

    advect_x(s, 0.5 * dt, c, parallel);
    advect_p(s, 0.5 * dt, c, parallel);

    if (c.d_p != 0.0 || c.d_xp != 0.0 || c.gamma != 0.0) {
        // midpoint RK2 with internal subcycling against the sharp 2D bound
        const double dx2 = s.grid.dx() * s.grid.dx(), dp2 = s.grid.dp() * s.grid.dp();
        double dt_stab = 0.4 / std::max(d_eff * (1.0 / dx2 + 1.0 / dp2), 1e-300);
        const double drift_speed = 2.0 * std::abs(c.gamma) * p_max;
        if (drift_speed > 0) dt_stab = std::min(dt_stab, 0.8 * s.grid.dp() / drift_speed);
        const int m = std::max(1, static_cast<int>(std::ceil(dt / dt_stab)));
        const double h = dt / m;
        const std::size_t sz = s.w.size();
        std::vector<double> k1(sz), wmid(sz);
        for (int sub = 0; sub < m; ++sub) {
            diffusion_rhs(s, c, s.w.data(), k1.data(), parallel);
            for (std::size_t q = 0; q < sz; ++q) wmid[q] = s.w[q] + 0.5 * h * k1[q];
            diffusion_rhs(s, c, wmid.data(), k1.data(), parallel);
            for (std::size_t q = 0; q < sz; ++q) s.w[q] += h * k1[q];
        }
    }

    advect_p(s, 0.5 * dt, c, parallel);
    advect_x(s, 0.5 * dt, c, parallel);
    s.time += dt;
}

std::vector<SeriesPoint> evolve(WignerState& s, const CoeffProvider& coeffs,
                                const EvolveOptions& opt, double hbar, bool parallel) {
    if (opt.dt <= 0 || opt.horizon <= 0)
        throw ConfigError("evolve: horizon and dt must be positive");
    const long nsteps = static_cast<long>(std::ceil(opt.horizon / opt.dt - 1e-9));
    std::vector<SeriesPoint> series;
    series.reserve(nsteps / std::max(1, opt.observe_every) + 2);

    StepCoeffs c0 = coeffs(s.time);
    auto record = [&]() {
        series.push_back({s.time, observables(s, c0.mass, opt.trap_omega, hbar, opt.vis_x0)});
    };
    record();
    for (long k = 0; k < nsteps; ++k) {
        const StepCoeffs c = coeffs(s.time + 0.5 * opt.dt);
        step(s, c, opt.dt, hbar, parallel);
        if ((k + 1) % std::max(1, opt.observe_every) == 0 || k + 1 == nsteps) {
            record();
            if (series.back().obs.boundary_mass > opt.boundary_abort)
                throw PhysicsError("boundary mass " +
                                   std::to_string(series.back().obs.boundary_mass) +
                                   " exceeds the configured abort threshold");
        }
    }
    return series;
}

StepCoeffs stationary_step_coeffs(const CoefficientTrace& tr, const Config& cfg) {
    StepCoeffs c;
    c.mass = cfg.phys.mirror_mass;
    const double W = cfg.phys.trap_frequency;
    // spectral values where they exist; trace plateau for the
    // whole-spectrum quantities, with the physical-generator signs
    c.d_p = -cfg.phys.hbar * tr.stat.d_pp_s;
    c.gamma = -tr.stat.gamma_s;
    c.d_xp = tr.d_xp.empty() ? 0.0 : cfg.phys.hbar * tr.d_xp.back();
    const double dw2 = tr.domega2_sq.empty() ? 0.0 : -tr.domega2_sq.back();
    c.omega_ren_sq = W * W + tr.delta_omega1_sq + dw2;
    return c;
}

StepCoeffs trace_step_coeffs(const CoefficientTrace& tr, const Config& cfg, double t) {
    if (tr.t.empty()) throw PhysicsError("trace_step_coeffs: empty trace");
    StepCoeffs c;
    c.mass = cfg.phys.mirror_mass;
    const double W = cfg.phys.trap_frequency;
    const double tc = std::clamp(t, tr.t.front(), tr.t.back());
    const double dt = tr.t[1] - tr.t[0];
    std::size_t i = std::min(static_cast<std::size_t>((tc - tr.t.front()) / dt),
                             tr.t.size() - 2);
    const double u = (tc - tr.t[i]) / dt;
    auto lerp = [&](const std::vector<double>& v) { return v[i] + u * (v[i + 1] - v[i]); };
    c.d_p = -cfg.phys.hbar * lerp(tr.d_pp);
    c.d_xp = cfg.phys.hbar * lerp(tr.d_xp);
    c.gamma = -lerp(tr.gamma);
    c.omega_ren_sq = W * W + tr.delta_omega1_sq - lerp(tr.domega2_sq);
    return c;
}

DecoherenceReport decoherence_report(const std::vector<SeriesPoint>& series,
                                     const CoefficientTrace& tr,
                                     const CatStateSpec& spec, const Config& cfg) {
    if (series.size() < 4) throw PhysicsError("decoherence_report: series too short");
    const double v0 = series.front().obs.visibility_raw;
    if (v0 <= 0) throw PhysicsError("decoherence_report: initial visibility vanishes");

    DecoherenceReport r;
    r.t.reserve(series.size());
    r.visibility.reserve(series.size());
    for (const auto& sp : series) {
        r.t.push_back(sp.t);
        r.visibility.push_back(sp.obs.visibility_raw / v0);
    }

    const double W = cfg.phys.trap_frequency;
    const double period = 2.0 * pi / W;
    const double efold = std::exp(-1.0);

    double t_efold = -1.0;
    for (std::size_t i = 0; i < r.t.size(); ++i)
        if (r.visibility[i] < efold) {
            t_efold = r.t[i];
            break;
        }
    if (t_efold < 0)
        throw PhysicsError("insufficient decay: visibility never reached 1/e of its "
                           "initial value within the horizon");

    std::vector<double> pk_t, pk_v;
    if (t_efold < 0.35 * period) {
        // decoherence beats the rotation: the early series is monotone, fit
        // it directly
        double running = 2.0;
        for (std::size_t i = 0; i < r.t.size(); ++i) {
            if (r.visibility[i] > 1.05 * running) break;
            running = std::min(running, r.visibility[i]);
            pk_t.push_back(r.t[i]);
            pk_v.push_back(r.visibility[i]);
        }
    } else {
        // slow decay: the raw visibility oscillates as the cat rotates, with
        // revivals every half period when the lobes realign; the revival
        // peaks decay monotonically
        const double bucket_len = 0.5 * period;
        std::size_t idx = 0;
        for (int bucket = 0; idx < r.t.size(); ++bucket) {
            double best = -1.0, best_t = 0.0;
            bool any = false;
            while (idx < r.t.size() && r.t[idx] < (bucket + 1) * bucket_len) {
                if (r.visibility[idx] > best) {
                    best = r.visibility[idx];
                    best_t = r.t[idx];
                }
                any = true;
                ++idx;
            }
            if (any) {
                pk_t.push_back(best_t);
                pk_v.push_back(best);
            }
        }
    }

    // least squares on ln v over peaks down to e^-1.6
    double st = 0, sv = 0, stt = 0, stv = 0;
    int npts = 0;
    for (std::size_t k = 0; k < pk_v.size(); ++k) {
        if (pk_v[k] <= 0 || pk_v[k] < std::exp(-1.6)) break;
        const double lv = std::log(pk_v[k]);
        st += pk_t[k];
        sv += lv;
        stt += pk_t[k] * pk_t[k];
        stv += pk_t[k] * lv;
        ++npts;
    }
    if (npts < 3) throw PhysicsError("insufficient decay: too few usable fit points");
    const double slope = (npts * stv - st * sv) / (npts * stt - st * st);
    if (slope >= 0) throw PhysicsError("insufficient decay: visibility not decreasing");
    r.t_xx_fitted = -1.0 / slope;

    const double hb = cfg.phys.hbar;
    const double dpp = std::abs(tr.stat.d_pp_s);
    r.t_xx_predicted = dpp > 0 ? hb / (dpp * spec.x0 * spec.x0) : 0.0;
    if (spec.p0 > 0 && !tr.d_xp.empty()) {
        const double dxp = std::abs(hb * tr.d_xp.back());
        r.t_xp_predicted = dxp > 0 ? hb / (dxp * spec.x0 * spec.p0) : 0.0;
    }
    const double gd = std::abs(tr.stat.gamma_s);
    r.t_relax = gd > 0 ? 1.0 / gd : 0.0;
    r.ratio_fitted = r.t_relax > 0 ? r.t_xx_fitted / r.t_relax : 0.0;
    // hbar Gamma^s / (D_PP^s x0^2); the stationary relation collapses it to
    // hbar / (M W z(W) x0^2), independent of the kernels
    const double z = thermal_factor(W, cfg.phys);
    r.ratio_structural = hb / (cfg.phys.mirror_mass * W * z * spec.x0 * spec.x0);
    return r;
}

} // namespace qmirror
