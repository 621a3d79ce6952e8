#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvqkd/ldpc.hpp"

// Construction of the shipped code catalog. Codes are multi-edge
// graphs built by progressive edge placement with short-cycle avoidance:
// an irregular core, optionally extended for low rates by degree-1
// variables whose checks relay channel observations into the core.

namespace cvqkd {

struct MetProfile {
    std::string code_id;
    std::uint32_t n = 0;        // total variables
    std::uint32_t k = 0;        // information bits (n - checks)
    std::uint32_t n_ext = 0;    // degree-1 extension variables (0: plain code)
    std::uint32_t d_ext = 0;    // core variables per extension check
    // Core variable degrees into core checks: (degree, node fraction of core vars).
    std::vector<std::pair<std::uint32_t, double>> core_degrees;
    std::uint32_t adapt_constant = 0;  // p + s constant for this code
    double snr_threshold = 0.0;        // measured FER<=10% operating point

    std::uint32_t n_core() const { return n - n_ext; }
    std::uint32_t m_core() const { return n_core() - k; }
    std::uint32_t m_total() const { return m_core() + n_ext; }
};

// Builds the Tanner graph for a profile; deterministic in the seed.
SparseParityCheck build_met_code(const MetProfile& profile, std::uint64_t seed);

// The three desk-scale profiles shipped with the artifact (base rates
// 0.5, 0.1 and 0.05 at n = 2^16) with their measured snr thresholds.
std::vector<MetProfile> desk_catalog_profiles();

// Generates the full catalog (alist files + manifest) into a directory.
// Returns the manifest path. Skips work when files are already present
// unless force is set.
std::string generate_catalog(const std::string& directory, std::uint64_t seed = 20120815,
                             bool force = false);

}  // namespace cvqkd
