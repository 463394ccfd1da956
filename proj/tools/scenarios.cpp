#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "runner.hpp"
#include "sqz/devices.hpp"
#include "sqz/fock.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/homodyne.hpp"
#include "sqz/protocols.hpp"
#include "sqz/version.hpp"

namespace sqz::cli {

namespace {

using nlohmann::json;

void emit(Outputs &out, const std::string &stem, const Table &table, bool json_tables) {
    out.add_text(stem + ".csv", table.to_csv());
    if (json_tables) {
        out.add_text(stem + ".json", table.to_json().dump(2) + "\n");
    }
}

std::string format_note(const std::string &label, double value) {
    std::ostringstream s;
    s << label << " = " << std::setprecision(6) << value;
    return s.str();
}

std::vector<double> linspace(double lo, double hi, long long n) {
    if (n < 1) {
        throw std::invalid_argument("step count must be at least 1");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return out;
}

std::size_t positive_count(const Params &p, const std::string &name) {
    const long long v = p.integer(name);
    if (v < 1) {
        throw std::invalid_argument(name + " must be at least 1");
    }
    return static_cast<std::size_t>(v);
}

std::string provenance(const std::string &scenario, const Params &p, std::uint64_t seed) {
    json j;
    j["pipeline"] = scenario;
    j["params"] = p.json();
    j["seed"] = seed;
    j["version"] = kVersion;
    return j.dump(2) + "\n";
}

void run_loss_sweep(const Params &p, std::uint64_t, Outputs &out, bool json_tables) {
    const double r = p.number("r");
    Table t{{"transmissivity", "var_x", "var_p", "squeezing_db", "antisqueezing_db"}, {}};
    for (double T : linspace(p.number("t_min"), p.number("t_max"), p.integer("t_steps"))) {
        const auto s = loss_channel(squeeze(vacuum(1), 0, r), 0, T);
        const double vx = s.cov()(0, 0);
        const double vp = s.cov()(1, 1);
        t.rows.push_back({T, vx, vp, squeezing_db(vx), squeezing_db(vp)});
    }
    emit(out, "loss_sweep", t, json_tables);
}

void run_opa_spectrum(const Params &p, std::uint64_t, Outputs &out, bool json_tables) {
    OpaConfig opa{p.number("gamma"), p.number("eta"), p.number("pump_ratio")};
    const auto freqs = linspace(0.0, p.number("f_max"), p.integer("n_points"));
    const auto spec = opa_spectrum(opa, freqs);
    std::ostringstream csv;
    write_spectrum_csv(csv, spec);
    out.add_text("opa_spectrum.csv", csv.str());
    Table summary{{"gamma_hz", "fwhm_hz", "v_minus_0", "squeezing_db_0", "v_plus_0", "antisqueezing_db_0"}, {}};
    summary.rows.push_back({opa.gamma, 2.0 * opa.gamma, spec.v_minus.front(), squeezing_db(spec.v_minus.front()),
                            spec.v_plus.front(), squeezing_db(spec.v_plus.front())});
    emit(out, "opa_summary", summary, json_tables);
    if (json_tables) {
        Table t{{"freq_hz", "v_plus", "v_minus"}, {}};
        for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
            t.rows.push_back({spec.freqs[k], spec.v_plus[k], spec.v_minus[k]});
        }
        out.add_text("opa_spectrum.json", t.to_json().dump(2) + "\n");
    }
    out.notes.push_back(format_note("squeezing at nu -> 0 [dB]", squeezing_db(spec.v_minus.front())));
    out.notes.push_back(format_note("gamma [Hz]", opa.gamma) + ", " + format_note("FWHM = 2 gamma [Hz]", 2.0 * opa.gamma));
}

void run_ppktp(const Params &p, std::uint64_t, Outputs &out, bool json_tables) {
    CrystalConfig crystal{p.number("chi_eff"), p.number("refractive_index"), p.number("length"), p.number("wavelength")};
    PumpConfig pump{p.number("power"), p.number("waist")};
    const auto field = pump_field_amplitude(pump, crystal);
    const double r = single_pass_r(crystal, pump);
    Table t{{"intensity_w_m2", "field_v_m", "r", "squeezing_db"}, {{field.intensity, field.amplitude, r, squeezing_db(0.5 * std::exp(-2.0 * r))}}};
    emit(out, "ppktp_estimate", t, json_tables);
    out.notes.push_back(format_note("single-pass r", r));
}

void run_cavity(const Params &p, std::uint64_t, Outputs &out, bool json_tables) {
    CavityConfig cavity{p.number("roundtrip_length"), p.number("loss"), p.number("coupler")};
    const auto f = cavity_figures(cavity);
    Table t{{"fsr_hz", "finesse", "gamma_hz", "fwhm_hz", "escape_efficiency"}, {{f.fsr, f.finesse, f.gamma, f.fwhm, f.escape_efficiency}}};
    emit(out, "cavity_figures", t, json_tables);
    out.notes.push_back(format_note("gamma [Hz]", f.gamma) + ", " + format_note("FWHM = 2 gamma [Hz]", f.fwhm));
}

void run_tomography(const Params &p, std::uint64_t seed, Outputs &out, bool json_tables) {
    const std::string kind = p.text("state");
    const auto phases = uniform_phases(positive_count(p, "n_phases"));
    const std::size_t samples = positive_count(p, "samples");
    const Eigen::MatrixXd grid = square_grid(p.number("half_width"), positive_count(p, "grid_n"));

    QuadratureDataset data;
    std::vector<double> truth;
    if (kind == "photon") {
        const auto one = FockState::basis(8, {1});
        data = sample_quadratures(one, 0, phases, samples, seed);
        truth = wigner_fock(one, grid);
    } else {
        GaussianState state = vacuum(1);
        if (kind == "squeezed") {
            state = squeeze(state, 0, p.number("r"));
        } else if (kind == "coherent") {
            state = displace(state, 0, p.number("alpha"));
        } else if (kind != "vacuum") {
            throw std::invalid_argument("state must be vacuum, squeezed, coherent or photon");
        }
        data = sample_quadratures(state, 0, phases, samples, seed);
        truth = wigner_gaussian(state, grid);
    }
    const double cutoff = p.number("filter_cutoff") > 0.0 ? p.number("filter_cutoff") : default_filter_cutoff(data);
    const auto w = reconstruct_wigner(data, grid, cutoff);

    double err2 = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        err2 += (w[k] - truth[k]) * (w[k] - truth[k]);
        peak = std::max(peak, std::abs(truth[k]));
    }
    const double l2 = std::sqrt(err2 / static_cast<double>(w.size())) / peak;

    std::ostringstream dataset;
    write_dataset_csv(dataset, data);
    out.add_text("dataset.csv", dataset.str());
    std::ostringstream wig;
    write_wigner_csv(wig, grid, w);
    out.add_text("wigner.csv", wig.str());
    const auto origin = bootstrap_wigner(data, 0.0, 0.0, 50, child_seed(seed, 1000), cutoff);
    Table t{{"filter_cutoff", "l2_error_rel", "w_origin", "w_origin_sigma"}, {{cutoff, l2, origin.value, origin.stddev}}};
    emit(out, "tomography_summary", t, json_tables);
    out.notes.push_back(format_note("relative L2 error", l2));
    out.notes.push_back(format_note("W(0,0)", origin.value) + " +/- " + std::to_string(origin.stddev));
}

void run_spectrum_drift(const Params &p, std::uint64_t seed, Outputs &out, bool json_tables) {
    DriftOptions options;
    const std::string model = p.text("drift_model");
    if (model == "ou") {
        options.model = DriftModel::OrnsteinUhlenbeck;
    } else if (model != "second-order") {
        throw std::invalid_argument("drift_model must be second-order or ou");
    }
    options.electronic_variance = p.number("electronic_variance");
    const auto trace = photocurrent_with_drift(p.number("quad_variance"), p.number("drift_amplitude"),
                                               p.number("drift_timescale"), p.number("fs"), p.number("duration"), seed,
                                               options);
    const auto spec = spectrum(trace, positive_count(p, "n_segments"));
    std::ostringstream csv;
    write_power_csv(csv, spec);
    out.add_text("spectrum.csv", csv.str());

    double var = 0.0;
    for (double v : trace.values) {
        var += v * v;
    }
    var /= static_cast<double>(trace.values.size());
    const double total_db = 10.0 * std::log10(var / trace.sql_variance);
    const double hf = spec.band_mean(1e6, 0.5 * trace.sample_rate());
    Table t{{"total_variance_over_sql_db", "floor_above_1mhz", "floor_above_1mhz_db"}, {{total_db, hf, squeezing_db(hf)}}};
    emit(out, "drift_summary", t, json_tables);
    out.notes.push_back(format_note("time-domain variance above SQL [dB]", total_db));
    out.notes.push_back(format_note("spectral level above 1 MHz relative to SQL [dB]", squeezing_db(hf)));
}

void run_teleport_sweep(const Params &p, std::uint64_t, Outputs &out, bool json_tables) {
    const double gain = p.number("gain");
    Table t{{"r", "fidelity", "added_noise"}, {}};
    const auto coherent = displace(vacuum(1), 0, 1.0);
    for (double r : linspace(p.number("r_min"), p.number("r_max"), p.integer("steps"))) {
        const auto res = teleport_gaussian(coherent, r, gain);
        t.rows.push_back({r, res.coherent_fidelity, res.added_noise_per_quadrature});
    }
    emit(out, "teleport_sweep", t, json_tables);
    out.notes.push_back(format_note("r for fidelity 2/3", resource_for_fidelity(2.0 / 3.0)));
}

void run_gw_sweep(const Params &p, std::uint64_t, Outputs &out, bool json_tables) {
    const double alpha = p.number("alpha");
    const double phi = p.number("phi");
    Table t{{"r", "eta", "snr", "phi_min"}, {}};
    for (double r : linspace(0.0, p.number("r_max"), p.integer("r_steps"))) {
        for (double eta : linspace(p.number("eta_min"), 1.0, p.integer("eta_steps"))) {
            const auto est = gw_phase_readout(phi, alpha, r, eta);
            t.rows.push_back({r, eta, est.snr, est.phi_min_detectable});
        }
    }
    emit(out, "gw_snr_sweep", t, json_tables);
    if (std::abs(phi) > 0.1) {
        out.notes.push_back("warning: |phi| > 0.1 is outside the linearized readout regime");
    }
}

void emit_state(Outputs &out, const std::string &scenario, const Params &p, std::uint64_t seed,
                const HeraldedState &h, bool json_tables) {
    out.add_text("state.json", to_json(h.state) + "\n");
    out.add_text("provenance.json", provenance(scenario, p, seed));
    Table t{{"probability", "fidelity", "n_branches", "norm_leak"},
            {{h.probability, h.fidelity, static_cast<double>(h.conditional.branches.size()), h.state.norm_leak()}}};
    emit(out, "summary", t, json_tables);
    out.notes.push_back(format_note("success probability", h.probability));
    out.notes.push_back(format_note("fidelity", h.fidelity));
    if (h.state.leak_warning()) {
        out.notes.push_back("warning: truncation leak exceeds tolerance; raise the cutoff");
    }
}

void run_herald(const Params &p, std::uint64_t seed, Outputs &out, bool json_tables) {
    emit_state(out, "herald-photon", p, seed, make_heralded_photon(p.number("r"), positive_count(p, "cutoff")), json_tables);
}

void run_kitten(const Params &p, std::uint64_t seed, Outputs &out, bool json_tables) {
    emit_state(out, "kitten", p, seed, make_kitten(p.number("r"), positive_count(p, "cutoff"), p.number("rho")), json_tables);
}

void run_superposition(const Params &p, std::uint64_t seed, Outputs &out, bool json_tables) {
    const std::complex<double> beta(p.number("ancilla_re"), p.number("ancilla_im"));
    const auto h = engineer_kitten_superposition(p.number("r"), beta, p.number("rho_tap"), p.number("rho_mix"),
                                                 positive_count(p, "cutoff"));
    emit_state(out, "kitten-superposition", p, seed, h, json_tables);
}

ParamSpec num(std::string name, double fallback, std::string help) {
    return {std::move(name), ParamKind::Number, false, fallback, std::move(help)};
}
ParamSpec integer(std::string name, long long fallback, std::string help) {
    return {std::move(name), ParamKind::Integer, false, fallback, std::move(help)};
}
ParamSpec text(std::string name, std::string fallback, std::string help) {
    return {std::move(name), ParamKind::String, false, std::move(fallback), std::move(help)};
}
ParamSpec required_num(std::string name, std::string help) {
    return {std::move(name), ParamKind::Number, true, nullptr, std::move(help)};
}

}  // namespace

const std::vector<Scenario> &catalog() {
    static const std::vector<Scenario> scenarios{
        {"loss-sweep",
         "squeezed vacuum through a loss channel: variances and dB against transmissivity",
         {num("r", 1.15, "squeezing parameter"), num("t_min", 0.1, "lowest transmissivity"),
          num("t_max", 1.0, "highest transmissivity"), integer("t_steps", 10, "number of transmissivities")},
         run_loss_sweep},
        {"opa-spectrum",
         "below-threshold OPA output spectrum V+/V- (spectrum CSV)",
         {num("gamma", 6.36e6, "cavity half-linewidth [Hz]; FWHM is 2 gamma"), num("eta", 0.75, "overall efficiency"),
          num("pump_ratio", 0.999999, "P / P_threshold in [0, 1)"), num("f_max", 1e8, "highest frequency [Hz]"),
          integer("n_points", 201, "frequency points")},
         run_opa_spectrum},
        {"ppktp-estimate",
         "single-pass squeezing parameter of a pumped crystal",
         {num("chi_eff", 14e-12, "effective nonlinearity [m/V]"), num("refractive_index", 1.8, "refractive index"),
          num("length", 5e-3, "crystal length [m]"), num("wavelength", 780e-9, "signal wavelength [m]"),
          num("power", 0.1, "pump power [W]"), num("waist", 50e-6, "pump waist radius [m]")},
         run_ppktp},
        {"cavity-figures",
         "free spectral range, finesse, linewidth and escape efficiency",
         {num("roundtrip_length", 0.3, "round-trip length [m]"), num("loss", 0.005, "round-trip loss excluding the coupler"),
          num("coupler", 0.015, "output coupler transmission")},
         run_cavity},
        {"tomography-demo",
         "homodyne data at evenly spaced phases and filtered-backprojection Wigner reconstruction",
         {text("state", "squeezed", "vacuum | squeezed | coherent | photon"), num("r", 0.69, "squeezing for state=squeezed"),
          num("alpha", 1.0, "amplitude for state=coherent"), integer("n_phases", 24, "distinct phases in [0, pi)"),
          integer("samples", 2000, "samples per phase"), integer("grid_n", 41, "grid points per axis"),
          num("half_width", 4.0, "grid half width"), num("filter_cutoff", 0.0, "Ram-Lak cutoff; 0 picks the default")},
         run_tomography},
        {"spectrum-drift-demo",
         "photocurrent with slow zero-point drift and its Welch spectrum",
         {num("quad_variance", 0.5, "white quadrature variance (SQL = 0.5)"),
          num("drift_amplitude", 1.2, "drift std in units of the per-sample SQL std"),
          num("drift_timescale", 2e-6, "drift correlation time [s]"), num("fs", 20e6, "sample rate [Hz]"),
          num("duration", 5e-3, "trace length [s]"), integer("n_segments", 16, "Welch segments"),
          text("drift_model", "second-order", "second-order | ou"),
          num("electronic_variance", 0.0, "additive white electronic noise (quadrature units)")},
         run_spectrum_drift},
        {"teleport-sweep",
         "coherent-state teleportation fidelity against resource squeezing",
         {required_num("r_max", "largest resource squeezing"), num("r_min", 0.0, "smallest resource squeezing"),
          integer("steps", 21, "number of r values"), num("gain", 1.0, "classical channel gain")},
         run_teleport_sweep},
        {"gw-snr-sweep",
         "dark-port phase readout SNR against squeezing and detection efficiency",
         {num("alpha", 1e4, "carrier amplitude"), num("phi", 1e-4, "differential phase [rad]"),
          num("r_max", 1.1513, "largest dark-port squeezing"), integer("r_steps", 6, "number of r values"),
          num("eta_min", 0.5, "lowest detection efficiency"), integer("eta_steps", 6, "number of efficiencies")},
         run_gw_sweep},
        {"herald-photon",
         "heralded single photon from a two-mode squeezed vacuum",
         {num("r", 0.05, "squeezing parameter"), integer("cutoff", 20, "Fock cutoff")},
         run_herald},
        {"kitten",
         "photon-subtracted squeezed vacuum (odd kitten)",
         {num("r", 0.2, "squeezing parameter"), num("rho", 0.05, "tap reflectivity"), integer("cutoff", 20, "Fock cutoff")},
         run_kitten},
        {"kitten-superposition",
         "tap mixed with a weak coherent ancilla before the click",
         {num("r", 0.2, "squeezing parameter"), num("ancilla_re", 0.01, "ancilla amplitude, real part"),
          num("ancilla_im", 0.0, "ancilla amplitude, imaginary part"), num("rho_tap", 0.05, "tap reflectivity"),
          num("rho_mix", 0.7071067811865476, "tap/ancilla mixing reflectivity"), integer("cutoff", 12, "Fock cutoff")},
         run_superposition},
    };
    return scenarios;
}

}  // namespace sqz::cli
