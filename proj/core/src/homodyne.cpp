#include "sqz/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

namespace sqz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    if (t >= kTwoPi) {
        t = 0.0;
    }
    return t;
}

// Hermite functions psi_0..psi_{d-1} at every x, as a d x n matrix.
Eigen::MatrixXd hermite_functions(std::size_t d, const std::vector<double> &xs) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd psi(static_cast<Eigen::Index>(d), n);
    const double c0 = std::pow(std::numbers::pi, -0.25);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double x = xs[static_cast<std::size_t>(j)];
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * x * x);
        psi(0, j) = cur;
        for (std::size_t k = 0; k + 1 < d; ++k) {
            const double next = std::sqrt(2.0 / static_cast<double>(k + 1)) * x * cur -
                                std::sqrt(static_cast<double>(k) / static_cast<double>(k + 1)) * prev;
            prev = cur;
            cur = next;
            psi(static_cast<Eigen::Index>(k + 1), j) = cur;
        }
    }
    return psi;
}

std::vector<double> marginal_from_rho(const Eigen::MatrixXcd &rho, double theta, const Eigen::MatrixXd &psi) {
    const Eigen::Index d = rho.rows();
    Eigen::MatrixXcd rot(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index k = 0; k < d; ++k) {
            rot(m, k) = rho(m, k) * std::exp(cplx(0.0, -static_cast<double>(m - k) * theta));
        }
    }
    const Eigen::MatrixXcd tmp = rot * psi.cast<cplx>();
    std::vector<double> out(static_cast<std::size_t>(psi.cols()));
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
        out[static_cast<std::size_t>(j)] = std::max(0.0, (psi.col(j).cast<cplx>().transpose() * tmp.col(j))(0).real());
    }
    return out;
}

Eigen::MatrixXcd normalized_reduced_rho(const FockState &state, std::size_t mode) {
    Eigen::MatrixXcd rho = reduced_density_matrix(state, mode);
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "quadrature sampling needs a normalized state (norm^2 = " << trace << ")";
        throw std::invalid_argument(msg.str());
    }
    return rho / trace;
}

std::vector<std::uint64_t> phase_seeds(std::uint64_t seed, std::size_t n) {
    std::vector<std::uint64_t> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = child_seed(seed, k);
    }
    return out;
}

// Groups samples by phase folded into [0, pi), with x -> -x for theta >= pi.
struct PhaseGroup {
    double theta;
    double weight;  // angular width assigned to this phase
    std::vector<double> xs;
};

std::vector<PhaseGroup> group_phases(const QuadratureDataset &data) {
    std::map<double, std::vector<double>> by_phase;
    for (const auto &s : data.samples) {
        double theta = wrap_phase(s.theta);
        double x = s.x;
        if (theta >= std::numbers::pi) {
            theta -= std::numbers::pi;
            x = -x;
        }
        // Merge phases that differ only by rounding.
        auto it = by_phase.lower_bound(theta - 1e-9);
        if (it != by_phase.end() && std::abs(it->first - theta) <= 1e-9) {
            it->second.push_back(x);
        } else {
            by_phase[theta].push_back(x);
        }
    }
    if (!by_phase.empty() && by_phase.rbegin()->first > std::numbers::pi - 1e-9) {
        // theta within rounding of pi folds onto 0.
        auto last = std::prev(by_phase.end());
        auto &zero = by_phase[0.0];
        for (double x : last->second) {
            zero.push_back(-x);
        }
        by_phase.erase(last);
    }
    if (by_phase.size() < 12) {
        std::ostringstream msg;
        msg << "tomography needs at least 12 distinct phases in [0, pi), got " << by_phase.size();
        throw std::invalid_argument(msg.str());
    }
    std::vector<PhaseGroup> groups;
    for (auto &[theta, xs] : by_phase) {
        groups.push_back({theta, 0.0, std::move(xs)});
    }
    const std::size_t m = groups.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double prev = k == 0 ? groups[m - 1].theta - std::numbers::pi : groups[k - 1].theta;
        const double next = k + 1 == m ? groups[0].theta + std::numbers::pi : groups[k + 1].theta;
        groups[k].weight = 0.5 * (next - prev);
    }
    return groups;
}

// (1/pi) * (1/2) int_{-kc}^{kc} |k| e^{iks} dk
double ramp_kernel(double s, double kc) {
    const double u = kc * s;
    if (std::abs(u) < 1e-4) {
        return (0.5 * kc * kc - kc * kc * u * u / 8.0) / std::numbers::pi;
    }
    return (u * std::sin(u) + std::cos(u) - 1.0) / (s * s * std::numbers::pi);
}

double backproject(const std::vector<PhaseGroup> &groups, double q, double p, double kc) {
    double w = 0.0;
    for (const auto &g : groups) {
        const double c = std::cos(g.theta);
        const double s = std::sin(g.theta);
        const double proj = q * c + p * s;
        double acc = 0.0;
        for (double x : g.xs) {
            acc += ramp_kernel(proj - x, kc);
        }
        w += g.weight * acc / static_cast<double>(g.xs.size());
    }
    return w / kTwoPi;
}

std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> uniform_phases(std::size_t n_phases) {
    std::vector<double> out(n_phases);
    for (std::size_t k = 0; k < n_phases; ++k) {
        out[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_phases);
    }
    return out;
}

QuadratureDataset sample_quadratures(const GaussianState &state, std::size_t mode, const std::vector<double> &thetas,
                                     std::size_t n_per_theta, std::uint64_t seed) {
    if (mode >= state.n_modes()) {
        throw std::invalid_argument("mode index out of range for quadrature sampling");
    }
    QuadratureDataset data;
    data.rng_seed = seed;
    data.source_meta = "gaussian";
    data.samples.reserve(thetas.size() * n_per_theta);
    const auto seeds = phase_seeds(seed, thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const double theta = wrap_phase(thetas[k]);
        std::mt19937_64 rng(seeds[k]);
        std::normal_distribution<double> normal(quadrature_mean(state, mode, theta),
                                                std::sqrt(quadrature_variance(state, mode, theta)));
        for (std::size_t j = 0; j < n_per_theta; ++j) {
            data.samples.push_back({theta, normal(rng)});
        }
    }
    return data;
}

std::vector<double> fock_quadrature_density(const FockState &state, std::size_t mode, double theta,
                                            const std::vector<double> &xs) {
    const Eigen::MatrixXcd rho = normalized_reduced_rho(state, mode);
    return marginal_from_rho(rho, theta, hermite_functions(state.cutoff(), xs));
}

QuadratureDataset sample_quadratures(const FockState &state, std::size_t mode, const std::vector<double> &thetas,
                                     std::size_t n_per_theta, std::uint64_t seed) {
    const Eigen::MatrixXcd rho = normalized_reduced_rho(state, mode);
    const std::size_t d = state.cutoff();
    const double half = std::sqrt(2.0 * static_cast<double>(d)) + 5.0;
    constexpr std::size_t kGrid = 4001;
    std::vector<double> xs(kGrid);
    for (std::size_t j = 0; j < kGrid; ++j) {
        xs[j] = -half + 2.0 * half * static_cast<double>(j) / static_cast<double>(kGrid - 1);
    }
    const Eigen::MatrixXd psi = hermite_functions(d, xs);
    const double dx = xs[1] - xs[0];

    QuadratureDataset data;
    data.rng_seed = seed;
    data.source_meta = "fock";
    data.samples.reserve(thetas.size() * n_per_theta);
    const auto seeds = phase_seeds(seed, thetas.size());
    std::vector<double> cdf(kGrid);
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const double theta = wrap_phase(thetas[k]);
        const auto density = marginal_from_rho(rho, theta, psi);
        cdf[0] = 0.0;
        for (std::size_t j = 1; j < kGrid; ++j) {
            cdf[j] = cdf[j - 1] + 0.5 * dx * (density[j - 1] + density[j]);
        }
        const double total = cdf.back();
        std::mt19937_64 rng(seeds[k]);
        std::uniform_real_distribution<double> uniform(0.0, total);
        for (std::size_t n = 0; n < n_per_theta; ++n) {
            const double u = uniform(rng);
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t j = static_cast<std::size_t>(std::distance(cdf.begin(), it));
            j = std::clamp<std::size_t>(j, 1, kGrid - 1);
            const double span = cdf[j] - cdf[j - 1];
            const double frac = span > 0.0 ? (u - cdf[j - 1]) / span : 0.5;
            data.samples.push_back({theta, xs[j - 1] + frac * dx});
        }
    }
    return data;
}

void write_dataset_csv(std::ostream &out, const QuadratureDataset &data) {
    out << "theta,x\n" << std::setprecision(17);
    for (const auto &s : data.samples) {
        out << s.theta << ',' << s.x << '\n';
    }
}

QuadratureDataset read_dataset_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta,x", 0) != 0) {
        throw std::invalid_argument("dataset CSV must start with the header theta,x");
    }
    QuadratureDataset data;
    data.source_meta = "csv";
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("malformed dataset line: " + line);
        }
        const double theta = std::stod(line.substr(0, comma));
        const double x = std::stod(line.substr(comma + 1));
        if (!std::isfinite(theta) || !std::isfinite(x)) {
            throw std::invalid_argument("non-finite value in dataset");
        }
        data.samples.push_back({wrap_phase(theta), x});
    }
    return data;
}

void PhotocurrentTrace::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("photocurrent sample interval must be positive");
    }
    if (values.size() < 2) {
        throw std::invalid_argument("photocurrent trace needs at least two samples");
    }
}

PhotocurrentTrace white_photocurrent(double quad_variance, double fs, std::size_t n_samples, std::uint64_t seed) {
    if (!(quad_variance > 0.0) || !(fs > 0.0)) {
        throw std::invalid_argument("white photocurrent needs positive variance and sample rate");
    }
    PhotocurrentTrace trace;
    trace.dt = 1.0 / fs;
    trace.sql_variance = kVacuumVariance * fs;
    trace.values.resize(n_samples);
    std::mt19937_64 rng(child_seed(seed, 0));
    std::normal_distribution<double> normal(0.0, std::sqrt(quad_variance * fs));
    for (auto &v : trace.values) {
        v = normal(rng);
    }
    trace.validate();
    return trace;
}

double matched_filter_quadrature(const PhotocurrentTrace &trace, const std::vector<double> &mode_fn) {
    trace.validate();
    if (mode_fn.size() != trace.values.size()) {
        throw std::invalid_argument("mode function and trace differ in length");
    }
    double norm = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < mode_fn.size(); ++k) {
        norm += mode_fn[k] * mode_fn[k];
        acc += mode_fn[k] * trace.values[k];
    }
    norm *= trace.dt;
    if (std::abs(norm - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "mode function must satisfy sum phi^2 dt = 1 (got " << norm << ")";
        throw std::invalid_argument(msg.str());
    }
    return acc * trace.dt;
}

PhotocurrentTrace photocurrent_with_drift(double quad_variance, double drift_amplitude, double drift_timescale,
                                          double fs, double duration, std::uint64_t seed, const DriftOptions &options) {
    if (!(fs > 0.0) || !(duration > 0.0) || !std::isfinite(fs * duration)) {
        throw std::invalid_argument("sample rate and duration must be positive");
    }
    if (!(quad_variance > 0.0) || !(drift_amplitude >= 0.0) || !(options.electronic_variance >= 0.0)) {
        throw std::invalid_argument("variances and drift amplitude must be non-negative");
    }
    if (drift_amplitude > 0.0 && !(drift_timescale > 0.0)) {
        throw std::invalid_argument("drift timescale must be positive");
    }
    const auto n = static_cast<std::size_t>(std::llround(fs * duration));
    if (n < 1024) {
        throw std::invalid_argument("fs * duration must be at least 1024 samples");
    }
    PhotocurrentTrace trace;
    trace.dt = 1.0 / fs;
    trace.sql_variance = kVacuumVariance * fs;
    trace.values.resize(n);

    std::mt19937_64 white_rng(child_seed(seed, 0));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double white_std = std::sqrt((quad_variance + options.electronic_variance) * fs);
    for (auto &v : trace.values) {
        v = white_std * normal(white_rng);
    }
    if (drift_amplitude == 0.0) {
        return trace;
    }

    std::mt19937_64 drift_rng(child_seed(seed, 1));
    const double drift_std = drift_amplitude * std::sqrt(trace.sql_variance);
    const double a = std::exp(-trace.dt / drift_timescale);
    const double one_minus_a2 = -std::expm1(-2.0 * trace.dt / drift_timescale);
    if (options.model == DriftModel::OrnsteinUhlenbeck) {
        const double kick = std::sqrt(one_minus_a2);
        double y = normal(drift_rng);
        for (auto &v : trace.values) {
            y = a * y + kick * normal(drift_rng);
            v += drift_std * y;
        }
        return trace;
    }
    // y1 <- a y1 + e, y2 <- a y2 + y1, started from the joint stationary law.
    const double var1 = 1.0 / one_minus_a2;
    const double cov12 = var1 / one_minus_a2;
    const double var2 = (1.0 + a * a) / (one_minus_a2 * one_minus_a2 * one_minus_a2);
    double y1 = std::sqrt(var1) * normal(drift_rng);
    double y2 = cov12 / var1 * y1 + std::sqrt(std::max(0.0, var2 - cov12 * cov12 / var1)) * normal(drift_rng);
    const double scale = drift_std / std::sqrt(var2);
    for (auto &v : trace.values) {
        y1 = a * y1 + normal(drift_rng);
        y2 = a * y2 + y1;
        v += scale * y2;
    }
    return trace;
}

double PowerSpectrum::band_mean(double f_lo, double f_hi) const {
    double s = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        if (freqs[k] >= f_lo && freqs[k] < f_hi) {
            s += power[k];
            ++count;
        }
    }
    if (count == 0) {
        throw std::invalid_argument("frequency band contains no bins");
    }
    return s / static_cast<double>(count);
}

PowerSpectrum spectrum(const PhotocurrentTrace &trace, std::size_t n_segments) {
    trace.validate();
    if (n_segments < 4) {
        throw std::invalid_argument("Welch averaging needs at least 4 segments");
    }
    const std::size_t n = trace.values.size();
    const std::size_t len = 2 * n / (n_segments + 1);
    if (len < 16) {
        throw std::invalid_argument("trace too short for the requested number of segments");
    }
    const std::size_t step = len / 2;
    const std::size_t bins = len / 2 + 1;

    std::vector<double> window(len);
    double wsum2 = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        window[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(len)));
        wsum2 += window[k] * window[k];
    }

    double *in = fftw_alloc_real(len);
    fftw_complex *out = fftw_alloc_complex(bins);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, out, FFTW_ESTIMATE);
    }

    PowerSpectrum spec;
    spec.segment_length = len;
    spec.n_segments = n_segments;
    spec.freqs.resize(bins);
    spec.power.assign(bins, 0.0);
    for (std::size_t k = 0; k < bins; ++k) {
        spec.freqs[k] = static_cast<double>(k) / (static_cast<double>(len) * trace.dt);
    }
    for (std::size_t seg = 0; seg < n_segments; ++seg) {
        const std::size_t start = seg * step;
        double mean = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            mean += trace.values[start + k];
        }
        mean /= static_cast<double>(len);
        for (std::size_t k = 0; k < len; ++k) {
            in[k] = window[k] * (trace.values[start + k] - mean);
        }
        fftw_execute(plan);
        for (std::size_t k = 0; k < bins; ++k) {
            spec.power[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
        }
    }
    const double scale = trace.dt / (wsum2 * static_cast<double>(n_segments));
    for (auto &p : spec.power) {
        p *= scale;
    }

    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return spec;
}

void write_spectrum_csv(std::ostream &out, const NoiseSpectrum &spec) {
    out << "freq_hz,v_plus,v_minus\n" << std::setprecision(12);
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
        out << spec.freqs[k] << ',' << spec.v_plus[k] << ',' << spec.v_minus[k] << '\n';
    }
}

void write_power_csv(std::ostream &out, const PowerSpectrum &spec) {
    out << "freq_hz,power\n" << std::setprecision(12);
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
        out << spec.freqs[k] << ',' << spec.power[k] << '\n';
    }
}

SidebandQuadratures sideband_quadratures(const PhotocurrentTrace &trace, double freq) {
    trace.validate();
    const std::size_t n = trace.values.size();
    const auto bin = static_cast<std::size_t>(std::llround(freq * static_cast<double>(n) * trace.dt));
    if (bin == 0 || 2 * bin >= n) {
        throw std::invalid_argument("sideband frequency must lie strictly between 0 and fs/2");
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = kTwoPi * static_cast<double>((bin * k) % n) / static_cast<double>(n);
        re += trace.values[k] * std::cos(phase);
        im -= trace.values[k] * std::sin(phase);
    }
    const double scale = std::sqrt(2.0 * trace.dt / static_cast<double>(n));
    return {static_cast<double>(bin) / (static_cast<double>(n) * trace.dt), scale * re, -scale * im};
}

double default_filter_cutoff(const QuadratureDataset &data) {
    const auto groups = group_phases(data);
    double min_var = std::numeric_limits<double>::infinity();
    double mean_count = 0.0;
    for (const auto &g : groups) {
        double m = 0.0;
        for (double x : g.xs) {
            m += x;
        }
        m /= static_cast<double>(g.xs.size());
        double v = 0.0;
        for (double x : g.xs) {
            v += (x - m) * (x - m);
        }
        v /= static_cast<double>(std::max<std::size_t>(1, g.xs.size() - 1));
        min_var = std::min(min_var, v);
        mean_count += static_cast<double>(g.xs.size());
    }
    mean_count /= static_cast<double>(groups.size());
    if (!(min_var > 0.0)) {
        throw std::invalid_argument("degenerate dataset: a phase has zero sample variance");
    }
    return 1.5 * std::sqrt(std::log(std::max(mean_count, 3.0))) / std::sqrt(min_var);
}

std::vector<double> reconstruct_wigner(const QuadratureDataset &data, const Eigen::MatrixXd &points,
                                       double filter_cutoff) {
    if (points.cols() != 2) {
        throw std::invalid_argument("Wigner points must be (x, p) rows");
    }
    const auto groups = group_phases(data);
    const double kc = filter_cutoff > 0.0 ? filter_cutoff : default_filter_cutoff(data);
    std::vector<double> out(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
        out[static_cast<std::size_t>(k)] = backproject(groups, points(k, 0), points(k, 1), kc);
    }
    return out;
}

BootstrapEstimate bootstrap_wigner(const QuadratureDataset &data, double x, double p, std::size_t n_resamples,
                                   std::uint64_t seed, double filter_cutoff) {
    if (n_resamples < 2) {
        throw std::invalid_argument("bootstrap needs at least two resamples");
    }
    const auto groups = group_phases(data);
    const double kc = filter_cutoff > 0.0 ? filter_cutoff : default_filter_cutoff(data);
    const double value = backproject(groups, x, p, kc);

    std::mt19937_64 rng(child_seed(seed, 0));
    auto resampled = groups;
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t b = 0; b < n_resamples; ++b) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::uniform_int_distribution<std::size_t> pick(0, groups[g].xs.size() - 1);
            for (auto &v : resampled[g].xs) {
                v = groups[g].xs[pick(rng)];
            }
        }
        const double w = backproject(resampled, x, p, kc);
        s1 += w;
        s2 += w * w;
    }
    const double nb = static_cast<double>(n_resamples);
    const double var = std::max(0.0, (s2 - s1 * s1 / nb) / (nb - 1.0));
    return {value, std::sqrt(var)};
}

double GaussianFit::axis_ratio() const { return std::sqrt(major_variance / minor_variance); }

GaussianFit fit_gaussian_wigner(const Eigen::MatrixXd &points, const std::vector<double> &values, double threshold) {
    if (points.cols() != 2 || static_cast<std::size_t>(points.rows()) != values.size()) {
        throw std::invalid_argument("points and values must describe the same grid");
    }
    const double peak = *std::max_element(values.begin(), values.end());
    if (!(peak > 0.0)) {
        throw std::invalid_argument("Wigner values have no positive peak to fit");
    }
    // log W = c0 + c1 x + c2 p + c3 x^2 + c4 x p + c5 p^2, weighted by W^2.
    std::vector<Eigen::Index> rows;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] > threshold * peak) {
            rows.push_back(static_cast<Eigen::Index>(k));
        }
    }
    if (rows.size() < 6) {
        throw std::invalid_argument("too few points above threshold for a Gaussian fit");
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 6);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = rows[i];
        const double x = points(r, 0);
        const double p = points(r, 1);
        const double w = values[static_cast<std::size_t>(r)];
        const auto ii = static_cast<Eigen::Index>(i);
        a.row(ii) << 1.0, x, p, x * x, x * p, p * p;
        a.row(ii) *= w;
        b(ii) = w * std::log(w);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    // Quadratic form -1/2 r^T M r with M the inverse covariance.
    Eigen::Matrix2d m;
    m << -2.0 * c(3), -c(4), -c(4), -2.0 * c(5);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(m);
    if (solver.eigenvalues().minCoeff() <= 0.0) {
        throw std::domain_error("fitted quadratic form is not negative definite");
    }
    const Eigen::Vector2d center = m.ldlt().solve(Eigen::Vector2d(c(1), c(2)));
    GaussianFit fit{};
    fit.center_x = center(0);
    fit.center_p = center(1);
    // Smallest eigenvalue of M is the inverse of the largest variance.
    fit.major_variance = 1.0 / solver.eigenvalues()(0);
    fit.minor_variance = 1.0 / solver.eigenvalues()(1);
    fit.angle = std::atan2(solver.eigenvectors()(1, 0), solver.eigenvectors()(0, 0));
    return fit;
}

Eigen::MatrixXd square_grid(double half_width, std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("grid needs at least two points per axis");
    }
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n * n), 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto row = static_cast<Eigen::Index>(i * n + j);
            pts(row, 0) = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(n - 1);
            pts(row, 1) = -half_width + 2.0 * half_width * static_cast<double>(j) / static_cast<double>(n - 1);
        }
    }
    return pts;
}

void write_wigner_csv(std::ostream &out, const Eigen::MatrixXd &points, const std::vector<double> &values) {
    out << "x,p,w\n" << std::setprecision(12);
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
        out << points(k, 0) << ',' << points(k, 1) << ',' << values[static_cast<std::size_t>(k)] << '\n';
    }
}

}  // namespace sqz
