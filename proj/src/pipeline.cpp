#include "cvqkd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "cvqkd/mdr.hpp"
#include "cvqkd/parallel.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

double SessionConfig::loss_db_effective() const {
    return loss_db ? *loss_db : km_to_db(distance_km, alpha_db_per_km);
}

double SessionConfig::t_effective() const { return db_to_transmittance(loss_db_effective()); }

void SessionConfig::validate() const {
    if (pulses < 8) throw std::domain_error("SessionConfig: too few pulses");
    if (!(rep_rate > 0)) throw std::domain_error("SessionConfig: rep_rate must be > 0");
    if (!(eps_total > 0 && eps_total < 1)) throw std::domain_error("SessionConfig: eps_total outside (0,1)");
    if (xi_true < 0 || xi_step_value < 0) throw std::domain_error("SessionConfig: negative excess noise");
    ProtocolParams probe{1.0, t_effective(), xi_true, eta, v_el, 0.95};
    probe.validate();
    DeviceUncertainty{delta_eta, delta_v_el}.validate(eta);
    grid.validate();
    fractions.validate();
}

// ---------------------------------------------------------------------------
// Config text format

namespace {

const char* const kConfigKeys =
    "distance_km loss_db alpha_db_per_km pulses rep_rate eta v_el delta_eta delta_v_el "
    "xi_true xi_step_pulse xi_step_value beta_analytic finite_block eps_total delta_constant "
    "catalog_path seed grid_truncation grid_bits shot_fraction pe_fraction max_iters llr_clamp";

bool known_key(const std::string& key) {
    std::istringstream ss(kConfigKeys);
    std::string k;
    while (ss >> k)
        if (k == key) return true;
    return false;
}

}  // namespace

SessionConfig parse_config(const std::string& text) {
    SessionConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw parse_error("config line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key))
            throw parse_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            if (key == "distance_km") c.distance_km = std::stod(value);
            else if (key == "loss_db") c.loss_db = std::stod(value);
            else if (key == "alpha_db_per_km") c.alpha_db_per_km = std::stod(value);
            else if (key == "pulses") c.pulses = std::stoull(value);
            else if (key == "rep_rate") c.rep_rate = std::stod(value);
            else if (key == "eta") c.eta = std::stod(value);
            else if (key == "v_el") c.v_el = std::stod(value);
            else if (key == "delta_eta") c.delta_eta = std::stod(value);
            else if (key == "delta_v_el") c.delta_v_el = std::stod(value);
            else if (key == "xi_true") c.xi_true = std::stod(value);
            else if (key == "xi_step_pulse") c.xi_step_pulse = std::stoull(value);
            else if (key == "xi_step_value") c.xi_step_value = std::stod(value);
            else if (key == "beta_analytic") c.beta_analytic = std::stod(value);
            else if (key == "finite_block") c.finite_block = std::stoull(value);
            else if (key == "eps_total") c.eps_total = std::stod(value);
            else if (key == "delta_constant") c.delta_constant = std::stod(value);
            else if (key == "catalog_path") c.catalog_path = value;
            else if (key == "seed") c.seed = std::stoull(value);
            else if (key == "grid_truncation") c.grid.truncation = std::stod(value);
            else if (key == "grid_bits") c.grid.bits = std::stoi(value);
            else if (key == "shot_fraction") c.fractions.shot_noise = std::stod(value);
            else if (key == "pe_fraction") c.fractions.param_est = std::stod(value);
            else if (key == "max_iters") c.decoder.max_iters = std::stoul(value);
            else if (key == "llr_clamp") c.decoder.llr_clamp = std::stof(value);
        } catch (const parse_error&) {
            throw;
        } catch (...) {
            throw parse_error("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
        }
    }
    return c;
}

SessionConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("load_config_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const SessionConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "distance_km = " << c.distance_km << '\n';
    if (c.loss_db) out << "loss_db = " << *c.loss_db << '\n';
    out << "alpha_db_per_km = " << c.alpha_db_per_km << '\n'
        << "pulses = " << c.pulses << '\n'
        << "rep_rate = " << c.rep_rate << '\n'
        << "eta = " << c.eta << '\n'
        << "v_el = " << c.v_el << '\n'
        << "delta_eta = " << c.delta_eta << '\n'
        << "delta_v_el = " << c.delta_v_el << '\n'
        << "xi_true = " << c.xi_true << '\n';
    if (c.xi_step_pulse)
        out << "xi_step_pulse = " << *c.xi_step_pulse << '\n'
            << "xi_step_value = " << c.xi_step_value << '\n';
    out << "beta_analytic = " << c.beta_analytic << '\n'
        << "finite_block = " << c.finite_block << '\n'
        << "eps_total = " << c.eps_total << '\n'
        << "delta_constant = " << c.delta_constant << '\n'
        << "catalog_path = " << c.catalog_path << '\n'
        << "seed = " << c.seed << '\n'
        << "grid_truncation = " << c.grid.truncation << '\n'
        << "grid_bits = " << c.grid.bits << '\n'
        << "shot_fraction = " << c.fractions.shot_noise << '\n'
        << "pe_fraction = " << c.fractions.param_est << '\n'
        << "max_iters = " << c.decoder.max_iters << '\n'
        << "llr_clamp = " << c.decoder.llr_clamp << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Session

namespace {

struct FrameOutcome {
    bool verified = false;
    std::uint32_t iterations = 0;
    std::vector<std::uint8_t> bob_bits;
    std::vector<std::uint8_t> alice_bits;
};

std::vector<std::uint8_t> pack_key(const BitVector& bits) {
    std::vector<std::uint8_t> out((bits.nbits + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.nbits; ++i)
        if (bits.get(i)) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return out;
}

}  // namespace

SessionReport run_session(const SessionConfig& config) {
    config.validate();
    if (config.catalog_path.empty()) throw std::domain_error("run_session: catalog_path required");
    const auto catalog = load_catalog(config.catalog_path);

    SessionReport rep;
    rep.seed = config.seed;
    rep.pulses = config.pulses;
    rep.loss_db = config.loss_db_effective();
    rep.eps_pe = config.eps_total;

    const double t_true = config.t_effective();

    // Code and modulation-variance selection from the nominal operating
    // point (per-code implied efficiency; beta <= 0 selects it).
    const CodeSelection sel = select_code_and_va(catalog, t_true, config.xi_true, config.eta,
                                                 config.v_el, /*beta=*/0.0);
    rep.code_id = sel.code.code_id;
    rep.v_a = sel.v_a;
    const SparseParityCheck code = load_code(sel.code.path);
    rep.code_rate = static_cast<double>(code.k()) / code.n();

    // --- simulate
    ProtocolParams params{sel.v_a, t_true, config.xi_true, config.eta, config.v_el, 0.95};
    const auto symbols = generate_modulation(config.pulses, sel.v_a, config.grid,
                                             derive_seed(config.seed, 1));
    std::vector<PulseFrame> frames;
    if (config.xi_step_pulse && *config.xi_step_pulse < config.pulses) {
        const std::uint64_t split = *config.xi_step_pulse;
        std::vector<std::pair<double, double>> head(symbols.begin(), symbols.begin() + split);
        std::vector<std::pair<double, double>> tail(symbols.begin() + split, symbols.end());
        frames = channel_and_detect(head, params, derive_seed(config.seed, 2), config.fractions);
        ProtocolParams stepped = params;
        stepped.xi = config.xi_step_value;
        auto rest = channel_and_detect(tail, stepped, derive_seed(config.seed, 3), config.fractions);
        for (auto& f : rest) f.index += split;
        frames.insert(frames.end(), rest.begin(), rest.end());
    } else {
        frames = channel_and_detect(symbols, params, derive_seed(config.seed, 2), config.fractions);
    }
    const SiftedData sifted = sift_and_partition(frames, config.fractions, derive_seed(config.seed, 4));
    rep.shot_frames = sifted.shot_values.size();
    rep.pe_frames = sifted.pe_x.size();
    rep.key_frames = sifted.key_x.size();

    // --- estimate
    const double n0_hat = estimate_shot_noise(sifted.shot_values, config.v_el);
    rep.estimate = estimate_channel(sifted.pe_x, sifted.pe_y, sel.v_a, config.eta, config.v_el, n0_hat);
    rep.snr_operating = snr(ProtocolParams{sel.v_a, std::max(rep.estimate.t_hat, 1e-12),
                                           rep.estimate.xi_physical(), config.eta, config.v_el, 0.95});

    bool bounds_ok = true;
    try {
        rep.bounds = worst_case_bounds(rep.estimate, sel.v_a, config.eta, config.v_el, config.eps_total);
    } catch (const estimation_failure&) {
        bounds_ok = false;
    }

    // --- reconcile
    const std::uint32_t payload = code.n();
    const std::uint64_t nframes = rep.key_frames / payload;
    rep.frames_total = nframes;
    rep.symbols_reconciled = nframes * payload;
    rep.symbols_leftover = rep.key_frames - rep.symbols_reconciled;

    const double inv_sqrt_n0 = 1.0 / std::sqrt(n0_hat);
    const double sigma2 = rep.estimate.sigma2_hat;
    const double t_slope = rep.estimate.t_slope;
    const RateAdaptation no_adapt;

    std::vector<FrameOutcome> outcomes(nframes);
    parallel_for(0, nframes, [&](std::uint64_t f) {
        FrameOutcome& out = outcomes[f];
        const std::uint64_t base = f * payload;
        Xoshiro256 bob_rng(derive_seed(config.seed, 100 + f));

        std::vector<std::uint8_t> u(payload);
        for (auto& b : u) b = static_cast<std::uint8_t>(bob_rng.coin());

        std::vector<double> llrs(payload);
        for (std::uint32_t blk = 0; blk < payload / 8; ++blk) {
            std::array<double, 8> x, y;
            std::uint8_t ubits = 0;
            for (int t = 0; t < 8; ++t) {
                const std::uint64_t i = base + 8 * blk + t;
                x[t] = sifted.key_x[i];
                y[t] = sifted.key_y[i] * inv_sqrt_n0;
                ubits |= static_cast<std::uint8_t>(u[8 * blk + t] & 1) << t;
            }
            const Octonion r = mdr_encode(std::span<const double, 8>(y), ubits);
            const auto llr8 = mdr_llrs(std::span<const double, 8>(x), r, sigma2, t_slope);
            for (int t = 0; t < 8; ++t) llrs[8 * blk + t] = llr8[t];
        }

        const auto syndrome = compute_syndrome(u, code);
        DecodeResult res = bp_decode(llrs, syndrome, code, no_adapt, config.decoder);
        out.iterations = res.iterations;
        const std::uint64_t hash_seed = derive_seed(config.seed, 500 + f);
        out.verified = res.converged && verify_blocks(res.bits, u, hash_seed);
        out.bob_bits = std::move(u);
        out.alice_bits = std::move(res.bits);
    });

    std::vector<std::uint8_t> bob_key_bits, alice_key_bits;
    double iter_sum = 0.0;
    for (auto& out : outcomes) {
        iter_sum += out.iterations;
        if (out.verified) {
            ++rep.frames_verified;
            bob_key_bits.insert(bob_key_bits.end(), out.bob_bits.begin(), out.bob_bits.end());
            alice_key_bits.insert(alice_key_bits.end(), out.alice_bits.begin(), out.alice_bits.end());
        } else {
            rep.symbols_discarded_fer += payload;
        }
    }
    rep.fer = nframes > 0 ? 1.0 - static_cast<double>(rep.frames_verified) / nframes : 0.0;
    rep.avg_iterations = nframes > 0 ? iter_sum / nframes : 0.0;
    rep.n_corrected = bob_key_bits.size();
    rep.leak_ec = rep.frames_verified * block_leakage_bits(code, no_adapt);
    rep.classical_bytes = nframes * (static_cast<std::uint64_t>(payload) * 8  // r messages
                                     + (code.m_rows() + 7) / 8 + 8);
    rep.beta_measured = rep.snr_operating > 0
                            ? rep.code_rate / mutual_information(rep.snr_operating)
                            : 0.0;

    // --- key lengths and privacy amplification
    const DeviceModel device{config.eta, config.v_el,
                             DeviceUncertainty{config.delta_eta, config.delta_v_el}};
    ProtocolParams point{sel.v_a, std::max(rep.estimate.t_hat, 1e-9), rep.estimate.xi_physical(),
                         config.eta, config.v_el, 0.95};
    rep.asymptotic.chi_be = holevo_bound(point);
    rep.asymptotic.key_length = compute_final_length(rep.n_corrected, rep.leak_ec,
                                                     rep.asymptotic.chi_be, 0.0, rep.n_corrected);

    if (bounds_ok && rep.symbols_reconciled >= 10000) {
        double chi_worst = 0.0;
        const double xi_wc = std::max(rep.bounds.xi_max, 0.0);
        for (const auto& [eta_c, vel_c] : device.corners()) {
            ProtocolParams worst{sel.v_a, std::max(rep.bounds.t_min, 1e-9), xi_wc, eta_c, vel_c, 0.95};
            chi_worst = std::max(chi_worst, holevo_bound(worst));
        }
        rep.finite.chi_be = chi_worst;
        rep.finite.delta = delta_n(rep.symbols_reconciled, config.eps_total, config.eps_total,
                                   config.delta_constant);
        rep.finite.key_length = compute_final_length(rep.n_corrected, rep.leak_ec, chi_worst,
                                                     rep.finite.delta, rep.n_corrected);
    } else {
        rep.finite.key_length = 0;  // estimation failure or too little data
    }

    rep.toeplitz_prng = ChaCha20::name();
    rep.toeplitz_seed = derive_seed(config.seed, 9000);
    auto amplify = [&](std::uint64_t l_out, const std::vector<std::uint8_t>& bits) {
        if (l_out == 0 || bits.empty()) return std::vector<std::uint8_t>{};
        ToeplitzSeed ts{rep.toeplitz_seed, bits.size(), l_out};
        return pack_key(toeplitz_hash(BitVector::from_bytes(bits), ts));
    };
    rep.key_asymptotic = amplify(rep.asymptotic.key_length, bob_key_bits);
    rep.key_finite = amplify(rep.finite.key_length, bob_key_bits);
    const auto alice_asym = amplify(rep.asymptotic.key_length, alice_key_bits);
    const auto alice_fin = amplify(rep.finite.key_length, alice_key_bits);
    rep.keys_match = (alice_asym == rep.key_asymptotic) && (alice_fin == rep.key_finite);

    auto fill_rates = [&](ModeReport& mode) {
        mode.bits_per_pulse = static_cast<double>(mode.key_length) / config.pulses;
        mode.bits_per_second = mode.bits_per_pulse * config.rep_rate;
        mode.rate_per_symbol = rep.symbols_reconciled > 0
                                   ? static_cast<double>(mode.key_length) / rep.symbols_reconciled
                                   : 0.0;
    };
    fill_rates(rep.asymptotic);
    fill_rates(rep.finite);
    return rep;
}

std::string SessionReport::to_text() const {
    std::ostringstream out;
    out.precision(10);
    out << "loss_db = " << loss_db << "\nv_a = " << v_a << "\ncode_id = " << code_id
        << "\ncode_rate = " << code_rate << "\nsnr_operating = " << snr_operating
        << "\nt_hat = " << estimate.t_hat << "\nxi_hat = " << estimate.xi_hat
        << "\nsigma2_hat = " << estimate.sigma2_hat << "\nn0_hat = " << estimate.n0_hat
        << "\nm_pe = " << estimate.m << "\nt_min = " << bounds.t_min
        << "\nxi_max = " << bounds.xi_max << "\neps_pe = " << eps_pe
        << "\nframes_total = " << frames_total << "\nframes_verified = " << frames_verified
        << "\nfer = " << fer << "\nbeta_measured = " << beta_measured
        << "\navg_iterations = " << avg_iterations << "\npulses = " << pulses
        << "\nshot_frames = " << shot_frames << "\npe_frames = " << pe_frames
        << "\nkey_frames = " << key_frames << "\nsymbols_reconciled = " << symbols_reconciled
        << "\nsymbols_leftover = " << symbols_leftover
        << "\nsymbols_discarded_fer = " << symbols_discarded_fer
        << "\nn_corrected = " << n_corrected << "\nleak_ec = " << leak_ec
        << "\nclassical_bytes = " << classical_bytes << "\nkeys_match = " << (keys_match ? 1 : 0)
        << "\nchi_asymptotic = " << asymptotic.chi_be
        << "\nkey_length_asymptotic = " << asymptotic.key_length
        << "\nbits_per_second_asymptotic = " << asymptotic.bits_per_second
        << "\nchi_finite_worst = " << finite.chi_be << "\ndelta_finite = " << finite.delta
        << "\nkey_length_finite = " << finite.key_length
        << "\nbits_per_second_finite = " << finite.bits_per_second
        << "\ntoeplitz_prng = " << toeplitz_prng << "\ntoeplitz_seed = " << toeplitz_seed
        << "\nseed = " << seed << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepRow> sweep_figure2(const SessionConfig& config,
                                    const std::vector<double>& distances_km) {
    config.validate();
    std::vector<CodeDescriptor> catalog;
    if (!config.catalog_path.empty()) catalog = load_catalog(config.catalog_path);

    std::vector<SweepRow> rows;
    for (double d : distances_km) {
        SweepRow row{};
        row.distance_km = d;
        row.loss_db = km_to_db(d, config.alpha_db_per_km);
        row.xi_assumed = config.xi_true;
        const double t = db_to_transmittance(row.loss_db);

        double v_a = 0.0;
        if (!catalog.empty()) {
            try {
                v_a = select_code_and_va(catalog, t, config.xi_true, config.eta, config.v_el,
                                         config.beta_analytic)
                          .v_a;
            } catch (const no_code_error&) {
                v_a = 0.0;
            }
        }
        if (v_a == 0.0) {
            // No feasible code: report the best achievable v_a instead.
            double best = -1e30;
            for (int i = 0; i <= 90; ++i) {
                const double cand = 1.0 + 9.0 * i / 90.0;
                ProtocolParams p{cand, t, config.xi_true, config.eta, config.v_el,
                                 config.beta_analytic};
                const double r = rate_asymptotic(p);
                if (r > best) { best = r; v_a = cand; }
            }
        }

        ProtocolParams p{v_a, t, config.xi_true, config.eta, config.v_el, config.beta_analytic};
        row.v_a = v_a;
        row.snr = snr(p);
        row.i_ab = mutual_information(row.snr);
        row.chi_be = holevo_bound(p);
        row.rate_asymptotic = rate_asymptotic(p);
        const DeviceUncertainty unc{config.delta_eta, config.delta_v_el};
        auto fin = [&](double n_total) {
            try {
                return rate_finite_analytic(p, FiniteSizeParams::half_split(
                                                   static_cast<std::uint64_t>(n_total),
                                                   config.eps_total),
                                            unc);
            } catch (const estimation_failure&) {
                return -1.0;
            }
        };
        row.rate_fin_1e9 = fin(1e9);
        row.rate_fin_1e8 = fin(1e8);
        // Ordering in bits per pulse with the 50% key fraction.
        row.ordering_ok = (0.5 * row.rate_asymptotic >= row.rate_fin_1e9 - 1e-12) &&
                          (row.rate_fin_1e9 >= row.rate_fin_1e8 - 1e-12);
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_figure2_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out.precision(10);
    out << "distance_km,loss_db,v_a,snr,i_ab,chi_be,rate_asymptotic,rate_fin_1e9,rate_fin_1e8,"
           "xi_assumed,ordering_ok\n";
    for (const auto& r : rows)
        out << r.distance_km << ',' << r.loss_db << ',' << r.v_a << ',' << r.snr << ',' << r.i_ab
            << ',' << r.chi_be << ',' << r.rate_asymptotic << ',' << r.rate_fin_1e9 << ','
            << r.rate_fin_1e8 << ',' << r.xi_assumed << ',' << (r.ordering_ok ? 1 : 0) << '\n';
    return out.str();
}

std::vector<NoiseRow> sweep_figure3(const SessionConfig& config,
                                    const std::vector<double>& block_sizes,
                                    std::uint32_t repetitions) {
    config.validate();
    if (repetitions < 10) throw std::domain_error("sweep_figure3: need at least 10 repetitions");

    const double t = config.t_effective();
    double v_a = 0.0;
    if (!config.catalog_path.empty()) {
        try {
            v_a = select_code_and_va(load_catalog(config.catalog_path), t, config.xi_true,
                                     config.eta, config.v_el, config.beta_analytic)
                      .v_a;
        } catch (const no_code_error&) {
        }
    }
    if (v_a == 0.0) {
        double best = -1e30;
        for (int i = 0; i <= 90; ++i) {
            const double cand = 1.0 + 9.0 * i / 90.0;
            ProtocolParams p{cand, t, config.xi_true, config.eta, config.v_el, config.beta_analytic};
            const double r = rate_asymptotic(p);
            if (r > best) { best = r; v_a = cand; }
        }
    }

    ProtocolParams truth{v_a, t, config.xi_true, config.eta, config.v_el, config.beta_analytic};
    const double slope = std::sqrt(config.eta * t);
    const double noise_sd = std::sqrt(1.0 + config.v_el + config.eta * t * config.xi_true);
    const double i_op = mutual_information(snr(truth));

    std::vector<NoiseRow> rows;
    for (double block : block_sizes) {
        const std::uint64_t m_equiv = static_cast<std::uint64_t>(block) / 2;
        const std::uint64_t m_used =
            std::min<std::uint64_t>(m_equiv, std::max<std::uint64_t>(config.pulses / 2, 1000));

        // Positive-rate frontier at this block size: largest xi for which
        // beta*I - Delta(n) - chi(xi) stays positive.
        const std::uint64_t n_key = static_cast<std::uint64_t>(block) / 2;
        const double penalty = delta_n(n_key, config.eps_total, config.eps_total,
                                       config.delta_constant);
        double lo = 0.0, hi = 0.5;
        auto margin = [&](double xi) {
            ProtocolParams p{v_a, t, xi, config.eta, config.v_el, config.beta_analytic};
            return config.beta_analytic * i_op - penalty - holevo_bound(p);
        };
        double frontier = 0.0;
        if (margin(0.0) > 0) {
            for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
                const double mid = 0.5 * (lo + hi);
                (margin(mid) > 0 ? lo : hi) = mid;
            }
            frontier = 0.5 * (lo + hi);
        }

        for (std::uint32_t rep = 0; rep < repetitions; ++rep) {
            Xoshiro256 rng(derive_seed(config.seed, 7000 + rep * 131 + static_cast<std::uint64_t>(block)));
            double sxx = 0.0, sxy = 0.0, syy = 0.0;
            std::vector<double> xs(m_used), ys(m_used);
            for (std::uint64_t i = 0; i < m_used; ++i) {
                const double x = std::sqrt(v_a) * sample_normal(rng);
                const double y = slope * x + noise_sd * sample_normal(rng);
                xs[i] = x;
                ys[i] = y;
                sxx += x * x;
                sxy += x * y;
                syy += y * y;
            }
            ChannelEstimate est = estimate_channel(xs, ys, v_a, config.eta, config.v_el, 1.0);
            est.m = m_equiv;  // worst-case gap evaluated at the equivalent block
            NoiseRow row{};
            row.repetition = rep;
            row.block_size_equiv = block;
            row.m_used = m_used;
            row.xi_hat = est.xi_hat;
            row.xi_frontier = frontier;
            try {
                const auto wc = worst_case_bounds(est, v_a, config.eta, config.v_el, config.eps_total);
                row.xi_max = wc.xi_max;
                row.positive_key = wc.xi_max < frontier;
            } catch (const estimation_failure&) {
                row.xi_max = std::numeric_limits<double>::quiet_NaN();
                row.positive_key = false;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_figure3_csv(const std::vector<NoiseRow>& rows) {
    std::ostringstream out;
    out.precision(10);
    out << "repetition,block_size_equiv,m_used,xi_hat,xi_max,xi_frontier,positive_key\n";
    for (const auto& r : rows)
        out << r.repetition << ',' << r.block_size_equiv << ',' << r.m_used << ',' << r.xi_hat
            << ',' << r.xi_max << ',' << r.xi_frontier << ',' << (r.positive_key ? 1 : 0) << '\n';
    return out.str();
}

std::string estimation_csv_header() {
    return "block_id,m,t_hat,sigma2_hat,xi_hat,t_min,xi_max,eps_pe\n";
}

std::string estimation_csv_row(std::uint64_t block_id, const ChannelEstimate& est,
                               const WorstCaseBounds& bounds) {
    std::ostringstream out;
    out.precision(10);
    out << block_id << ',' << est.m << ',' << est.t_hat << ',' << est.sigma2_hat << ','
        << est.xi_hat << ',' << bounds.t_min << ',' << bounds.xi_max << ',' << bounds.eps_pe
        << '\n';
    return out.str();
}

}  // namespace cvqkd
