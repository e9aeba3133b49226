// Steppers and ensembles. The Heun scheme integrates the Stratonovich form
// (drift without the correction, diffusion averaged between predictor and
// corrector); the Euler-Maruyama twin integrates the Ito form (full drift,
// frozen diffusion). Both see identical Brownian increments so their strong
// difference is a measurable consistency check.
#include "spinwell/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "spinwell/errors.hpp"
#include "spinwell/kernels.hpp"

namespace spinwell {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Polar Box-Muller over mt19937_64; one generator per path.
struct NormalSource {
    std::mt19937_64 eng;
    double spare = 0.0;
    bool have_spare = false;

    explicit NormalSource(std::uint64_t seed) : eng(seed) {}

    double uniform() { return (eng() >> 11) * 0x1.0p-53; }

    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare = v * f;
        have_spare = true;
        return u * f;
    }
};

void axpy_state(GalerkinState& y, double a, const StateDerivative& d) {
    kern::ops().axpy(y.m.c.data(), a, d.dm.c.data(), y.m.c.size());
    kern::ops().axpy(y.b.c.data(), a, d.db.c.data(), y.b.c.size());
    kern::ops().axpy(y.e.c.data(), a, d.de.c.data(), y.e.c.size());
}

double state_max_abs(const GalerkinState& s) {
    const auto& o = kern::ops();
    return std::max({o.max_abs(s.m.c.data(), s.m.c.size()),
                     o.max_abs(s.b.c.data(), s.b.c.size()),
                     o.max_abs(s.e.c.data(), s.e.c.size())});
}

// Pull the magnetization back to unit length at the quadrature nodes and
// reproject. Not part of the scheme proper; exposed for comparison runs.
void renormalize_nodes(Dynamics& dyn, GalerkinState& s) {
    synthesize_H(dyn.sb->mag, s.m, dyn.ew.mgrid);
    GridField& g = dyn.ew.mgrid;
    double* mx = g.comp(0);
    double* my = g.comp(1);
    double* mz = g.comp(2);
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        const double r = std::sqrt(mx[i] * mx[i] + my[i] * my[i] + mz[i] * mz[i]);
        if (r > 1e-12) {
            mx[i] /= r;
            my[i] /= r;
            mz[i] /= r;
        }
    }
    project_H(dyn.sb->mag, g, s.m);
}

// Residual of the norm-rate identity at a state, normalized by ||M||_H^2:
// |2<M, F(M)> + sum_j ||G_j(M)||^2|. Uses the Ito drift; the identity is
// exact for spatially constant noise profiles.
double norm_identity_residual(Dynamics& dyn, const GalerkinState& s, StepWork& w) {
    full_drift(dyn, s, true, w.d0, dyn.noise.J > 0 ? &w.g0 : nullptr, nullptr);
    double acc = 2.0 * dot(s.m, w.d0.dm);
    for (int j = 0; j < dyn.noise.J; ++j)
        acc += h_norm2(w.g0[j]);
    const double scale = std::max(h_norm2(s.m), 1e-300);
    return std::fabs(acc) / scale;
}

double divb_drift(const EMBasis& em, const CoeffsY& b, const std::vector<double>& div0) {
    const std::vector<double> d = divergence_coeffs(em, b);
    double m = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        m = std::max(m, std::fabs(d[i] - div0[i]));
    return m;
}

} // namespace

BrownianPath make_brownian_path(std::uint64_t master_seed, int path_index, int J,
                                long steps, double dt) {
    BrownianPath p;
    p.master_seed = master_seed;
    p.path_index = path_index;
    p.J = J;
    p.steps = steps;
    p.dt = dt;
    p.dw.resize(static_cast<std::size_t>(steps) * J);
    NormalSource src(splitmix64(
        master_seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(path_index + 1))));
    const double sd = std::sqrt(dt);
    for (double& x : p.dw)
        x = sd * src.next();
    return p;
}

BrownianPath coarsen_path(const BrownianPath& fine, int factor) {
    if (factor < 1 || fine.steps % factor != 0)
        throw ConfigError("path coarsening factor must divide the step count");
    BrownianPath p;
    p.master_seed = fine.master_seed;
    p.path_index = fine.path_index;
    p.J = fine.J;
    p.steps = fine.steps / factor;
    p.dt = fine.dt * factor;
    p.dw.assign(static_cast<std::size_t>(p.steps) * p.J, 0.0);
    for (long k = 0; k < fine.steps; ++k) {
        const double* src = fine.row(k);
        double* dst = p.dw.data() + static_cast<std::size_t>(k / factor) * p.J;
        for (int j = 0; j < p.J; ++j)
            dst[j] += src[j];
    }
    return p;
}

void step_heun(Dynamics& dyn, GalerkinState& s, double dt, const double* dw,
               StepWork& w, StepDiag* diag) {
    const int J = dyn.noise.J;
    full_drift(dyn, s, false, w.d0, J > 0 ? &w.g0 : nullptr, diag);

    w.pred = s;
    axpy_state(w.pred, dt, w.d0);
    for (int j = 0; j < J; ++j)
        kern::ops().axpy(w.pred.m.c.data(), dw[j], w.g0[j].c.data(), w.pred.m.c.size());
    w.pred.t = s.t + dt;

    full_drift(dyn, w.pred, false, w.d1, J > 0 ? &w.g1 : nullptr, nullptr);

    axpy_state(s, 0.5 * dt, w.d0);
    axpy_state(s, 0.5 * dt, w.d1);
    for (int j = 0; j < J; ++j) {
        kern::ops().axpy(s.m.c.data(), 0.5 * dw[j], w.g0[j].c.data(), s.m.c.size());
        kern::ops().axpy(s.m.c.data(), 0.5 * dw[j], w.g1[j].c.data(), s.m.c.size());
    }
    s.t += dt;
}

void step_em_ito(Dynamics& dyn, GalerkinState& s, double dt, const double* dw,
                 StepWork& w, StepDiag* diag) {
    const int J = dyn.noise.J;
    full_drift(dyn, s, true, w.d0, J > 0 ? &w.g0 : nullptr, diag);
    axpy_state(s, dt, w.d0);
    for (int j = 0; j < J; ++j)
        kern::ops().axpy(s.m.c.data(), dw[j], w.g0[j].c.data(), s.m.c.size());
    s.t += dt;
}

Trajectory simulate(Dynamics& dyn, const GalerkinState& init, const BrownianPath& path,
                    const SimOptions& opt) {
    Trajectory out;
    GalerkinState s = init;
    StepWork w;
    StepWork sample_w; // keeps sample-time drift evaluations off the stepper scratch
    const double dt = path.dt;
    const int out_every = std::max(1, opt.out_every);
    const std::vector<double> div0 = divergence_coeffs(dyn.sb->em, s.b);
    out.step_energy_defect.reserve(static_cast<std::size_t>(path.steps));

    double prev_total = 0.0, prev_rate = 0.0, prev_mxrho = 0.0;

    // Iteration k first records the diagnostics of the state at t_k, then
    // (except at k = steps) advances it. Every state s_0 .. s_N gets exactly
    // one diag; the defect of the step ending at t_k lands in the row at t_k.
    for (long k = 0; k <= path.steps; ++k) {
        const bool last = (k == path.steps);
        const bool sampled = opt.record_rows && (k % out_every == 0 || last);
        const double db_drift = divb_drift(dyn.sb->em, s.b, div0);
        out.max_divb_drift = std::max(out.max_divb_drift, db_drift);

        double nres = 0.0;
        if (sampled && opt.record_norm_resid)
            nres = norm_identity_residual(dyn, s, sample_w);

        StepDiag diag;
        if (!last) {
            const double* dw = path.J > 0 ? path.row(k) : nullptr;
            if (opt.scheme == Scheme::Heun)
                step_heun(dyn, s, dt, dw, w, &diag);
            else
                step_em_ito(dyn, s, dt, dw, w, &diag);
            s.t = init.t + (k + 1) * dt; // exact, immune to accumulation drift
            if (opt.renormalize)
                renormalize_nodes(dyn, s);
        } else {
            // One more drift evaluation purely for the final state's diag.
            full_drift(dyn, s, false, sample_w.d0, nullptr, &diag);
        }

        out.sup_v_norm2 = std::max(out.sup_v_norm2, diag.v_norm2_m);
        out.sup_zeeman2 = std::max(out.sup_zeeman2, 2.0 * diag.energy.zeeman);
        out.sup_electric2 = std::max(out.sup_electric2, 2.0 * diag.energy.electric);

        double defect = 0.0;
        if (k > 0) {
            defect = diag.energy.total - prev_total -
                     0.5 * dt * (prev_rate + diag.rate(dyn.lambda2));
            out.step_energy_defect.push_back(defect);
            out.max_energy_defect = std::max(out.max_energy_defect, std::fabs(defect));
            out.max_energy_increase =
                std::max(out.max_energy_increase, diag.energy.total - prev_total);
            out.int_mxrho2 += 0.5 * dt * (prev_mxrho + diag.diss_mxrho);
        }
        prev_total = diag.energy.total;
        prev_rate = diag.rate(dyn.lambda2);
        prev_mxrho = diag.diss_mxrho;

        if (sampled) {
            SampleRow r;
            r.t = init.t + k * dt;
            r.h_norm_m = std::sqrt(diag.h_norm2_m);
            r.v_norm_m = std::sqrt(diag.v_norm2_m);
            r.e_aniso = diag.energy.anisotropy;
            r.e_exch = diag.energy.exchange;
            r.e_zeeman = diag.energy.zeeman;
            r.e_elec = diag.energy.electric;
            r.e_total = diag.energy.total;
            r.divb_resid = db_drift;
            r.sphere_max_dev = diag.sphere_max_dev;
            r.norm_ident_resid = nres;
            r.energy_ident_resid = std::fabs(defect);
            out.rows.push_back(r);
        }

        if (!last) {
            const double amp = state_max_abs(s);
            if (!std::isfinite(amp) || amp > opt.blowup_threshold)
                throw NumericalAbort("coefficient magnitude passed the blow-up threshold",
                                     k + 1, s.t, amp);
        }
    }

    out.final_state = std::move(s);
    return out;
}

EnsembleStats run_ensemble(const Dynamics& prototype, const GalerkinState& init,
                           long steps, double dt, std::uint64_t master_seed, int K,
                           const SimOptions& opt, int threads) {
    EnsembleStats stats;
    stats.K = K;
    stats.paths.resize(static_cast<std::size_t>(std::max(0, K)));

    if (threads <= 0) {
        threads = 1;
        if (const char* env = std::getenv("SPINWELL_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0)
                threads = v;
        }
    }
    threads = std::min(threads, std::max(1, K));

    auto worker = [&](int tid) {
        Dynamics dyn = prototype; // private workspace per thread
        for (int p = tid; p < K; p += threads) {
            PathResult& r = stats.paths[p];
            r.index = p;
            try {
                const BrownianPath path =
                    make_brownian_path(master_seed, p, dyn.noise.J, steps, dt);
                const Trajectory tr = simulate(dyn, init, path, opt);
                r.sup_v_norm2 = tr.sup_v_norm2;
                r.sup_zeeman2 = tr.sup_zeeman2;
                r.sup_electric2 = tr.sup_electric2;
                r.int_mxrho2 = tr.int_mxrho2;
                if (!tr.rows.empty())
                    r.final_energy = tr.rows.back().e_total;
            } catch (const NumericalAbort& e) {
                r.failed = true;
                r.error = e.what();
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
        for (auto& th : pool)
            th.join();
    }

    // Two-pass mean / standard-error reduction in fixed path order, so the
    // numbers do not depend on the thread count.
    auto reduce = [&](auto pick) {
        Moment m;
        int n = 0;
        double sum = 0, sum_sq = 0;
        for (const PathResult& r : stats.paths)
            if (!r.failed) {
                const double x = pick(r);
                sum += x;
                sum_sq += x * x;
                ++n;
            }
        if (n == 0)
            return m;
        m.mean = sum / n;
        m.mean_sq = sum_sq / n;
        if (n > 1) {
            double var = 0, var_sq = 0;
            for (const PathResult& r : stats.paths)
                if (!r.failed) {
                    const double x = pick(r);
                    var += (x - m.mean) * (x - m.mean);
                    var_sq += (x * x - m.mean_sq) * (x * x - m.mean_sq);
                }
            m.se = std::sqrt(var / (n - 1) / n);
            m.se_sq = std::sqrt(var_sq / (n - 1) / n);
        }
        return m;
    };

    for (const PathResult& r : stats.paths)
        if (r.failed)
            ++stats.failed;
    stats.sup_v_norm2 = reduce([](const PathResult& r) { return r.sup_v_norm2; });
    stats.sup_zeeman2 = reduce([](const PathResult& r) { return r.sup_zeeman2; });
    stats.sup_electric2 = reduce([](const PathResult& r) { return r.sup_electric2; });
    stats.int_mxrho2 = reduce([](const PathResult& r) { return r.int_mxrho2; });
    return stats;
}

} // namespace spinwell
