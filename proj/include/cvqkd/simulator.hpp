#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvqkd/model.hpp"
#include "cvqkd/rng.hpp"

// Pulse-stream simulation: Alice's truncated discretized Gaussian
// modulation, the Gaussian channel with loss and excess noise, the
// trusted detector, and the sifting/partition bookkeeping.

namespace cvqkd {

enum class Role : std::uint8_t { key = 0, param_est = 1, shot_noise = 2 };

struct PulseFrame {
    std::uint64_t index;
    double alice_q;
    double alice_p;
    Quadrature phi_choice;  // Bob's measured quadrature (relative phase 0 or pi/2)
    double bob_value;
    Role role;
};

struct ModulationGrid {
    double truncation = 7.0;  // half-width in standard deviations
    int bits = 8;             // quantization bits per quadrature

    void validate() const;
    double step(double v_a) const;  // grid step in SNU^(1/2)
};

struct SiftFractions {
    double shot_noise = 0.5;  // pulses diverted to shot-noise estimation
    double param_est = 0.5;   // fraction of signal pulses disclosed

    void validate() const;
};

// Centered Gaussian pairs of variance v_a, truncated at
// +-truncation*sqrt(v_a) and rounded to the 2^bits-level grid.
// Deterministic in (seed); chunked internally so generation order
// matches the chunk-parallel path bit for bit.
std::vector<std::pair<double, double>> generate_modulation(std::uint64_t n, double v_a,
                                                           const ModulationGrid& grid,
                                                           std::uint64_t seed);

// Applies the channel and the trusted detector. Roles are assigned
// per-frame from independent coin flips (fractions.shot_noise for the
// calibration split); shot-noise frames carry zero modulation and noise
// variance 1 + v_el, signal frames bob = sqrt(eta t) x_phi + z with z of
// variance 1 + v_el + eta t xi.
std::vector<PulseFrame> channel_and_detect(const std::vector<std::pair<double, double>>& symbols,
                                           const ProtocolParams& params, std::uint64_t seed,
                                           const SiftFractions& fractions = {});

struct SiftedData {
    // Alice's symbol matching Bob's disclosed quadrature, paired with
    // Bob's value; split by role.
    std::vector<double> key_x, key_y;
    std::vector<double> pe_x, pe_y;
    std::vector<double> shot_values;
    std::uint64_t total_frames = 0;
};

// Splits signal frames into key / parameter-estimation (seed-determined,
// value-independent) and reduces Alice's record to the quadrature
// matching Bob's disclosed phi on every signal frame.
SiftedData sift_and_partition(std::vector<PulseFrame>& frames, const SiftFractions& fractions,
                              std::uint64_t seed);

// Flat binary persistence: 16-byte header (magic "CVQKDFRM", u32 version,
// u32 reserved), then little-endian records
// {u64 index, f64 alice_q, f64 alice_p, u8 phi, f64 bob_value, u8 role}.
void write_frames(std::ostream& out, const std::vector<PulseFrame>& frames);
std::vector<PulseFrame> read_frames(std::istream& in);
void write_frames_file(const std::string& path, const std::vector<PulseFrame>& frames);
std::vector<PulseFrame> read_frames_file(const std::string& path);

}  // namespace cvqkd
