#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvqkd/estimation.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/ldpc.hpp"
#include "cvqkd/privamp.hpp"
#include "cvqkd/simulator.hpp"

// End-to-end orchestration: full sessions (simulate -> sift -> estimate ->
// select code -> reconcile -> verify -> amplify), the figure sweeps and
// the flat-text config/CSV formats behind the CLI.

namespace cvqkd {

struct SessionConfig {
    double distance_km = 25.0;
    std::optional<double> loss_db;  // overrides distance when set
    double alpha_db_per_km = 0.2;
    std::uint64_t pulses = 1000000;
    double rep_rate = 1e6;

    double eta = 0.552;
    double v_el = 0.015;
    double delta_eta = 0.0;
    double delta_v_el = 0.0;

    double xi_true = 0.005;
    // Optional stepped excess noise: xi jumps to xi_step_value from this
    // pulse index on (drift is out of scope; steps cover the use case).
    std::optional<std::uint64_t> xi_step_pulse;
    double xi_step_value = 0.0;

    double beta_analytic = 0.95;   // used by analytic sweeps only
    std::uint64_t finite_block = 0;  // N for finite-size accounting; 0 = pulses
    double eps_total = 1e-10;
    double delta_constant = 7.0;

    std::string catalog_path;
    std::uint64_t seed = 1;

    ModulationGrid grid;
    SiftFractions fractions;
    DecoderOptions decoder;

    double loss_db_effective() const;
    double t_effective() const;
    void validate() const;
};

// Flat text "key = value" round trip; unknown keys are an error.
SessionConfig parse_config(const std::string& text);
SessionConfig load_config_file(const std::string& path);
std::string format_config(const SessionConfig& config);

struct ModeReport {
    double chi_be = 0.0;         // bits per symbol charged to Eve
    double delta = 0.0;          // finite-size penalty, bits per symbol
    std::uint64_t key_length = 0;
    double bits_per_pulse = 0.0;
    double bits_per_second = 0.0;
    double rate_per_symbol = 0.0;  // secret bits per reconciled symbol
};

struct SessionReport {
    // channel truth and selection
    double loss_db = 0.0;
    double v_a = 0.0;
    std::string code_id;
    double code_rate = 0.0;
    double snr_operating = 0.0;

    // estimation
    ChannelEstimate estimate{};
    WorstCaseBounds bounds{};
    double eps_pe = 0.0;

    // reconciliation
    std::uint64_t frames_total = 0;
    std::uint64_t frames_verified = 0;
    double fer = 0.0;
    double beta_measured = 0.0;
    double avg_iterations = 0.0;

    // accounting (bits unless noted)
    std::uint64_t pulses = 0;
    std::uint64_t shot_frames = 0;
    std::uint64_t pe_frames = 0;
    std::uint64_t key_frames = 0;
    std::uint64_t symbols_reconciled = 0;  // key symbols placed into frames
    std::uint64_t symbols_leftover = 0;    // key symbols not filling a frame
    std::uint64_t symbols_discarded_fer = 0;
    std::uint64_t n_corrected = 0;         // verified corrected bits
    std::uint64_t leak_ec = 0;             // syndrome + hash leakage
    std::uint64_t classical_bytes = 0;     // r messages + syndromes + hashes

    ModeReport asymptotic;
    ModeReport finite;

    std::uint64_t seed = 0;
    std::string toeplitz_prng;
    std::uint64_t toeplitz_seed = 0;
    bool keys_match = false;                   // Alice's and Bob's final keys identical
    std::vector<std::uint8_t> key_asymptotic;  // packed key bytes (Bob's side)
    std::vector<std::uint8_t> key_finite;

    std::string to_text() const;
};

SessionReport run_session(const SessionConfig& config);

struct SweepRow {
    double distance_km, loss_db, v_a, snr, i_ab, chi_be;
    double rate_asymptotic;  // bits per key symbol
    double rate_fin_1e9;     // bits per pulse
    double rate_fin_1e8;     // bits per pulse
    double xi_assumed;
    bool ordering_ok;
};

// Figure-2 style analytic rate sweep; v_a per distance from the code
// selection rule against the given catalog.
std::vector<SweepRow> sweep_figure2(const SessionConfig& config,
                                    const std::vector<double>& distances_km);
std::string sweep_figure2_csv(const std::vector<SweepRow>& rows);

struct NoiseRow {
    std::uint32_t repetition;
    double block_size_equiv;  // pulses the reported m corresponds to
    std::uint64_t m_used;     // simulated disclosed pairs
    double xi_hat;
    double xi_max;
    double xi_frontier;  // positive-rate threshold at this block size
    bool positive_key;
};

// Figure-3 style excess-noise scatter with worst-case estimators at the
// equivalent block sizes plus the positive-rate frontier.
std::vector<NoiseRow> sweep_figure3(const SessionConfig& config,
                                    const std::vector<double>& block_sizes,
                                    std::uint32_t repetitions);
std::string sweep_figure3_csv(const std::vector<NoiseRow>& rows);

// Estimation-report CSV row (one per block):
// block_id,m,t_hat,sigma2_hat,xi_hat,t_min,xi_max,eps_pe
std::string estimation_csv_header();
std::string estimation_csv_row(std::uint64_t block_id, const ChannelEstimate& est,
                               const WorstCaseBounds& bounds);

}  // namespace cvqkd
