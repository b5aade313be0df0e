#include "rabispec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rabispec {

namespace {

using Eigen::VectorXcd;
using std::complex;

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights for the error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (quartic interpolant).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct Rhs {
    const LevelSystem& system;
    double f0;
    double omega;
    const std::vector<std::pair<int, int>>& pairs;
    std::vector<double> freq_diff; // omega_p - omega_q per coupled pair

    Rhs(const LevelSystem& sys, const Drive& drive)
        : system(sys), f0(drive.f0), omega(drive.omega), pairs(sys.coupled_pairs()) {
        freq_diff.reserve(pairs.size());
        for (const auto& [p, q] : pairs)
            freq_diff.push_back(sys.omega(p) - sys.omega(q));
    }

    void operator()(double t, const VectorXcd& a, VectorXcd& da) const {
        da.setZero();
        const double drive = f0 * std::cos(omega * t);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [p, q] = pairs[k];
            const complex<double> phase = std::polar(1.0, freq_diff[k] * t);
            const complex<double> g(0.0, -drive * system.couplings()(p, q));
            da[p] += g * phase * a[q];
            da[q] += g * std::conj(phase) * a[p];
        }
    }
};

double scaled_rms(const VectorXcd& v, const VectorXcd& y0, const VectorXcd& y1,
                  double abs_tol, double rel_tol) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double sc = abs_tol + rel_tol * std::max(std::abs(y0[k]), std::abs(y1[k]));
        const double r = std::abs(v[k]) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

// Starting step size along the lines of Hairer's hinit.
double initial_step(const Rhs& rhs, double t0, const VectorXcd& y0, const VectorXcd& f0,
                    double abs_tol, double rel_tol, double h_max) {
    const double d0 = scaled_rms(y0, y0, y0, abs_tol, rel_tol);
    const double d1 = scaled_rms(f0, y0, y0, abs_tol, rel_tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, h_max);

    VectorXcd y1 = y0 + h0 * f0;
    VectorXcd f1(y0.size());
    rhs(t0 + h0, y1, f1);
    const double d2 = scaled_rms(f1 - f0, y0, y0, abs_tol, rel_tol) / h0;

    double h1;
    const double dm = std::max(d1, d2);
    if (dm <= 1e-15) {
        h1 = std::max(1e-6, h0 * 1e-3);
    } else {
        h1 = std::pow(0.01 / dm, 0.2);
    }
    return std::min({100.0 * h0, h1, h_max});
}

double norm_drift(const VectorXcd& a) {
    return std::abs(a.squaredNorm() - 1.0);
}

std::size_t lower_index(const std::vector<double>& ts, double t) {
    return static_cast<std::size_t>(
        std::lower_bound(ts.begin(), ts.end(), t) - ts.begin());
}

// Vertex of the parabola through three grid points around index k.
// Returns the plain sample when the points are not concave.
Peak quadratic_vertex(const std::vector<double>& ts, const std::vector<double>& ys,
                      std::size_t k) {
    if (k == 0 || k + 1 >= ts.size()) return {ts[k], ys[k]};
    const double t0 = ts[k - 1], t1 = ts[k], t2 = ts[k + 1];
    const double y0 = ys[k - 1], y1 = ys[k], y2 = ys[k + 1];
    const double g1 = (y1 - y0) / (t1 - t0);
    const double g2 = (y2 - y1) / (t2 - t1);
    const double curv = (g2 - g1) / (t2 - t0);
    if (!(curv < 0.0)) return {t1, y1};
    const double tv = 0.5 * (t0 + t1 - g1 / curv);
    const double yv = y0 + g1 * (tv - t0) + curv * (tv - t0) * (tv - t1);
    return {tv, yv};
}

} // namespace

AmplitudeState basis_state(const LevelSystem& system, int level, double t) {
    system.check_level(level);
    AmplitudeState s;
    s.t = t;
    s.a = VectorXcd::Zero(system.size());
    s.a[level] = 1.0;
    return s;
}

PopulationTrace integrate(const LevelSystem& system, const Drive& drive,
                          const AmplitudeState& initial, double t_end,
                          const IntegratorOptions& opts) {
    check_drive(drive);
    const int n = system.size();
    if (initial.a.size() != n)
        fail(errc::non_normalized_initial, "initial amplitude vector has wrong length");
    if (std::abs(initial.a.squaredNorm() - 1.0) > 1e-12)
        fail(errc::non_normalized_initial, "initial amplitudes are not normalized");
    if (!(t_end > initial.t))
        fail(errc::bad_time_span, "t_end must exceed the initial time");
    if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) || !(opts.norm_tolerance > 0.0))
        fail(errc::bad_tolerances, "tolerances must be positive");

    const double t0 = initial.t;
    const double span = t_end - t0;

    double omega_max = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            omega_max = std::max(omega_max, system.transition_freq(i, j));
    const double fastest = drive.omega + omega_max;

    // Counter-rotating terms are the whole point of the non-RWA solver; the
    // step cap keeps them resolved even when the error estimate would allow
    // striding over them.
    const double max_step =
        opts.max_step > 0.0 ? opts.max_step : (2.0 * M_PI / fastest) / 10.0;

    // Dense-output grid.
    std::vector<double> samples;
    if (!opts.sample_times.empty()) {
        samples = opts.sample_times;
        if (!std::is_sorted(samples.begin(), samples.end()))
            fail(errc::bad_time_span, "sample_times must be ascending");
        if (samples.front() < t0 || samples.back() > t_end)
            fail(errc::bad_time_span, "sample_times must lie within [t0, t_end]");
    } else {
        double dt = opts.sample_dt;
        if (!(dt > 0.0)) {
            constexpr double kMaxAutoSamples = 50000.0;
            constexpr double kMinAutoSamples = 500.0;
            dt = std::max(span / kMaxAutoSamples,
                          std::min((2.0 * M_PI / fastest) / 12.0, span / kMinAutoSamples));
        }
        if (span / dt > 2e7)
            fail(errc::bad_time_span, "sample grid finer than 2e7 points; raise sample_dt");
        for (std::size_t k = 0; t0 + static_cast<double>(k) * dt < t_end; ++k)
            samples.push_back(t0 + static_cast<double>(k) * dt);
        samples.push_back(t_end);
    }

    Rhs rhs(system, drive);

    std::vector<double> out_t;
    std::vector<VectorXcd> out_a;
    auto emit = [&](double t, const VectorXcd& a) {
        if (!out_t.empty() && !(t > out_t.back())) return;
        out_t.push_back(t);
        out_a.push_back(a);
    };

    TraceMetadata meta;
    meta.f0 = drive.f0;
    meta.drive_omega = drive.omega;
    meta.rel_tol = opts.rel_tol;
    meta.abs_tol = opts.abs_tol;
    meta.norm_tolerance = opts.norm_tolerance;
    meta.max_step = max_step;
    meta.degenerate_levels = system.has_degenerate_coupled_pair();

    double t = t0;
    VectorXcd y = initial.a;
    VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), ytmp(n), err(n);
    rhs(t, y, k1);

    std::size_t next_sample = lower_index(samples, t0);
    while (next_sample < samples.size() && samples[next_sample] <= t0) ++next_sample;
    emit(t0, y);

    double h = initial_step(rhs, t, y, k1, opts.abs_tol, opts.rel_tol,
                            std::min(max_step, span));
    bool just_rejected = false;

    while (t < t_end) {
        h = std::min(h, max_step);
        bool final_step = false;
        if (t + 1.0001 * h >= t_end) {
            h = t_end - t;
            final_step = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            std::ostringstream os;
            os << "step size underflow at t = " << t << " (h = " << h << ")";
            fail(errc::step_size_underflow, os.str());
        }

        ytmp = y + h * (a21 * k1);
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y5, k7);

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double errnorm = scaled_rms(err, y, y5, opts.abs_tol, opts.rel_tol);
        if (!std::isfinite(errnorm)) errnorm = 1e10;

        if (errnorm <= 1.0) {
            // land exactly on t_end; the clipped h may round one ulp short
            const double t_new = final_step ? t_end : t + h;
            // dense output inside (t, t_new]
            if (next_sample < samples.size() && samples[next_sample] <= t_new) {
                const VectorXcd ydiff = y5 - y;
                const VectorXcd bspl = h * k1 - ydiff;
                const VectorXcd r4 = ydiff - h * k7 - bspl;
                const VectorXcd r5 =
                    h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (next_sample < samples.size() && samples[next_sample] <= t_new) {
                    const double ts = samples[next_sample];
                    const double th = std::min((ts - t) / h, 1.0);
                    const VectorXcd ys =
                        y + th * (ydiff + (1.0 - th) * (bspl + th * (r4 + (1.0 - th) * r5)));
                    emit(ts, ys);
                    ++next_sample;
                }
            }
            t = t_new;
            y.swap(y5);
            k1.swap(k7);
            if (opts.keep_step_points) emit(t, y);

            const double drift = norm_drift(y);
            meta.max_norm_drift = std::max(meta.max_norm_drift, drift);
            if (drift > opts.norm_tolerance) {
                std::ostringstream os;
                os << "norm drift " << drift << " exceeds tolerance "
                   << opts.norm_tolerance << " at t = " << t
                   << "; tolerances are too loose for this run";
                fail(errc::norm_drift_exceeded, os.str());
            }

            double fac = errnorm > 1e-30 ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
            fac = std::clamp(fac, 0.2, just_rejected ? 1.0 : 5.0);
            h *= fac;
            just_rejected = false;
            ++meta.accepted_steps;
        } else {
            h *= std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 1.0);
            just_rejected = true;
            ++meta.rejected_steps;
        }
    }

    meta.final_norm_drift = norm_drift(y);

    PopulationTrace trace;
    trace.meta = meta;
    trace.times = std::move(out_t);
    const auto rows = static_cast<Eigen::Index>(trace.times.size());
    trace.amplitudes.resize(rows, n);
    trace.populations.resize(rows, n);
    for (Eigen::Index r = 0; r < rows; ++r) {
        trace.amplitudes.row(r) = out_a[static_cast<std::size_t>(r)].transpose();
        for (int c = 0; c < n; ++c)
            trace.populations(r, c) = std::norm(trace.amplitudes(r, c));
    }
    return trace;
}

Peak peak_population(const PopulationTrace& trace, int level, double t_lo, double t_hi) {
    if (level < 0 || level >= trace.levels())
        fail(errc::level_out_of_range, "peak_population: level out of range");
    if (trace.samples() == 0) fail(errc::empty_window, "peak_population: empty trace");
    if (!(t_lo <= t_hi) || t_hi < trace.times.front() || t_lo > trace.times.back())
        fail(errc::empty_window, "peak_population: window outside the trace span");

    const std::size_t first = lower_index(trace.times, t_lo);
    Peak best;
    bool any = false;
    for (std::size_t k = first; k < trace.times.size() && trace.times[k] <= t_hi; ++k) {
        const double v = trace.populations(static_cast<Eigen::Index>(k), level);
        if (!any || v > best.value) {
            best = {trace.times[k], v};
            any = true;
        }
    }
    if (!any) fail(errc::empty_window, "peak_population: no samples inside the window");
    return best;
}

double measured_transfer_period(const PopulationTrace& trace, int level) {
    if (level < 0 || level >= trace.levels())
        fail(errc::level_out_of_range, "measured_transfer_period: level out of range");
    const std::size_t m = trace.times.size();
    if (m < 3) fail(errc::no_peak_found, "trace too short");

    std::vector<double> pop(m);
    for (std::size_t k = 0; k < m; ++k)
        pop[k] = trace.populations(static_cast<Eigen::Index>(k), level);

    const double peak = *std::max_element(pop.begin(), pop.end());
    if (!(peak > 0.0)) fail(errc::no_peak_found, "population stays at zero");
    const double half = 0.5 * peak;
    if (pop.front() > half)
        fail(errc::no_peak_found, "level is not initially (near-)empty");

    // first up-crossing of half the global maximum
    std::size_t up = m;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (pop[k] <= half && pop[k + 1] > half) {
            up = k;
            break;
        }
    }
    if (up == m) fail(errc::no_peak_found, "population never exceeds half its maximum");

    // matching down-crossing closes the first crest
    std::size_t down = m;
    for (std::size_t k = up + 1; k + 1 < m; ++k) {
        if (pop[k] > half && pop[k + 1] <= half) {
            down = k;
            break;
        }
    }
    if (down == m)
        fail(errc::no_peak_found, "trace ends before the first maximum completes");

    const auto cross = [&](std::size_t k) {
        return trace.times[k] + (half - pop[k]) * (trace.times[k + 1] - trace.times[k]) /
                                    (pop[k + 1] - pop[k]);
    };
    const double t_up = cross(up);
    const double t_down = cross(down);

    const std::size_t lo = up + 1, hi = down; // samples strictly above half
    const std::size_t count = hi - lo + 1;
    const std::size_t arg =
        lo + static_cast<std::size_t>(std::max_element(pop.begin() + static_cast<std::ptrdiff_t>(lo),
                                                       pop.begin() + static_cast<std::ptrdiff_t>(hi + 1)) -
                                      (pop.begin() + static_cast<std::ptrdiff_t>(lo)));

    double t_peak;
    if (count >= 5) {
        // least-squares parabola over the whole crest
        const double tc = 0.5 * (trace.times[lo] + trace.times[hi]);
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, z0 = 0, z1 = 0, z2 = 0;
        for (std::size_t k = lo; k <= hi; ++k) {
            const double x = trace.times[k] - tc;
            const double x2 = x * x;
            s0 += 1;
            s1 += x;
            s2 += x2;
            s3 += x2 * x;
            s4 += x2 * x2;
            z0 += pop[k];
            z1 += pop[k] * x;
            z2 += pop[k] * x2;
        }
        Eigen::Matrix3d M;
        M << s0, s1, s2, s1, s2, s3, s2, s3, s4;
        const Eigen::Vector3d rhs(z0, z1, z2);
        const Eigen::Vector3d c = M.fullPivLu().solve(rhs);
        if (c[2] < 0.0) {
            t_peak = tc - c[1] / (2.0 * c[2]);
        } else {
            t_peak = quadratic_vertex(trace.times, pop, arg).t;
        }
    } else {
        t_peak = quadratic_vertex(trace.times, pop, arg).t;
    }

    return std::clamp(t_peak, t_up, t_down);
}

std::vector<Peak> local_maxima(const PopulationTrace& trace, int level,
                               double min_height, double min_prominence) {
    if (level < 0 || level >= trace.levels())
        fail(errc::level_out_of_range, "local_maxima: level out of range");
    const std::size_t m = trace.times.size();
    std::vector<double> pop(m);
    for (std::size_t k = 0; k < m; ++k)
        pop[k] = trace.populations(static_cast<Eigen::Index>(k), level);

    std::vector<Peak> peaks;
    for (std::size_t k = 1; k + 1 < m; ++k) {
        if (!(pop[k] > pop[k - 1])) continue;
        // ride out a flat top
        std::size_t j = k;
        while (j + 1 < m && pop[j + 1] == pop[k]) ++j;
        if (j + 1 >= m || pop[j + 1] > pop[k]) continue;
        if (pop[k] < min_height) continue;

        // prominence: descend on both sides until higher ground
        double base_l = pop[k];
        for (std::size_t i = k; i-- > 0 && pop[i] <= pop[k];) base_l = std::min(base_l, pop[i]);
        double base_r = pop[k];
        for (std::size_t i = j + 1; i < m && pop[i] <= pop[k]; ++i)
            base_r = std::min(base_r, pop[i]);
        if (pop[k] - std::max(base_l, base_r) < min_prominence) continue;

        peaks.push_back(quadratic_vertex(trace.times, pop, k));
    }
    return peaks;
}

} // namespace rabispec
