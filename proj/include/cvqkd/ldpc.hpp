#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/keyrate.hpp"

// Multi-edge LDPC machinery: alist code I/O, syndrome computation,
// flooding-schedule belief propagation on MDR LLRs, rate adaptation by
// puncturing/shortening, efficiency measurement and block verification.

namespace cvqkd {

struct DegreeSummary {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> var_degrees;    // (degree, count)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> check_degrees;  // (degree, count)
    std::uint64_t edges = 0;
};

class SparseParityCheck {
  public:
    SparseParityCheck(std::uint32_t n, std::uint32_t m_rows,
                      std::vector<std::vector<std::uint32_t>> rows);

    std::uint32_t n() const { return n_; }
    std::uint32_t m_rows() const { return m_; }
    std::uint32_t k() const { return n_ - m_; }
    std::uint64_t edges() const { return row_col_.size(); }

    // CSR by check: columns of row j are row_cols(j).
    std::span<const std::uint32_t> row_cols(std::uint32_t j) const {
        return {row_col_.data() + row_ptr_[j], row_ptr_[j + 1] - row_ptr_[j]};
    }
    // Edge ids incident to variable i (edge id = position in row order).
    std::span<const std::uint32_t> col_edges(std::uint32_t i) const {
        return {col_edge_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
    }
    std::uint32_t edge_col(std::uint32_t e) const { return row_col_[e]; }
    std::span<const std::uint32_t> row_ptr() const { return row_ptr_; }

    DegreeSummary degree_summary() const;

    CodeDescriptor meta;

  private:
    std::uint32_t n_, m_;
    std::vector<std::uint32_t> row_ptr_;   // size m+1
    std::vector<std::uint32_t> row_col_;   // edges in row order
    std::vector<std::uint32_t> col_ptr_;   // size n+1
    std::vector<std::uint32_t> col_edge_;  // edge ids grouped by column
};

// Standard alist interchange format. Malformed input throws parse_error
// with a line number.
SparseParityCheck load_code(const std::string& path);
void save_code(const std::string& path, const SparseParityCheck& code);

// XOR of bits over each check row.
std::vector<std::uint8_t> compute_syndrome(std::span<const std::uint8_t> bits,
                                           const SparseParityCheck& code);

struct RateAdaptation {
    std::vector<std::uint32_t> punctured;  // llr 0 (unknown)
    std::vector<std::uint32_t> shortened;  // llr +inf (known zero)
    std::uint32_t constant = 0;            // punctured + shortened, fixed per code

    std::uint32_t p_count() const { return static_cast<std::uint32_t>(punctured.size()); }
    std::uint32_t s_count() const { return static_cast<std::uint32_t>(shortened.size()); }
    double effective_rate(const SparseParityCheck& code) const;
    std::uint32_t payload_symbols(const SparseParityCheck& code) const {
        return code.n() - p_count() - s_count();
    }
};

// Effective rate (k - s)/(n - constant) realized with p + s = constant;
// positions drawn by seeded uniform sampling. Throws std::range_error
// with the achievable interval when the target cannot be met.
RateAdaptation adapt_rate(const SparseParityCheck& code, double target_rate,
                          std::uint32_t constant, std::uint64_t seed);

// Sentinel marking a shortened (known zero) position in an LLR vector.
inline constexpr double kShortenedLlr = 1e30;

// Scatters payload-position LLRs into a full length-n vector with 0 at
// punctured and the shortened sentinel at shortened positions.
std::vector<double> place_llrs(std::span<const double> payload_llrs,
                               const SparseParityCheck& code, const RateAdaptation& adapt);

struct DecodeResult {
    std::vector<std::uint8_t> bits;  // hard decisions, length n (shortened forced 0)
    bool converged = false;
    std::uint32_t iterations = 0;
    bool syndrome_ok = false;
};

struct DecoderOptions {
    std::uint32_t max_iters = 200;
    float llr_clamp = 50.0f;
};

// Sum-product decoding with flooding schedule toward a target syndrome.
// Non-convergence is a result state, not an error.
DecodeResult bp_decode(std::span<const double> llrs, std::span<const std::uint8_t> syndrome,
                       const SparseParityCheck& code, const RateAdaptation& adapt,
                       const DecoderOptions& opts = {});

struct EfficiencyReport {
    double beta;          // R_eff / capacity at the measured snr
    double fer;           // frame error rate across trials
    double r_eff;
    std::uint32_t trials;
    double avg_iterations;
    double symbols_per_second;  // decoder throughput during measurement
};

// Runs the MDR + BP chain over `trials` frames of the virtual channel at
// the given snr and reports the operating point (beta, FER).
EfficiencyReport measure_efficiency(const SparseParityCheck& code, const RateAdaptation& adapt,
                                    double snr_value, std::uint32_t trials, std::uint64_t seed,
                                    const DecoderOptions& opts = {});

// 64-bit universal polynomial hash over GF(2^64); the evaluation point is
// derived from `seed` and exchanged out of band.
std::uint64_t verification_hash(std::span<const std::uint8_t> bits, std::uint64_t seed);

// Compares verification hashes; the 64 exchanged bits count as leakage.
bool verify_blocks(std::span<const std::uint8_t> alice_bits,
                   std::span<const std::uint8_t> bob_bits, std::uint64_t seed);

// Leakage of one reconciled block: syndrome bits not masked by punctured
// positions plus the verification hash.
inline std::uint64_t block_leakage_bits(const SparseParityCheck& code,
                                        const RateAdaptation& adapt) {
    return static_cast<std::uint64_t>(code.m_rows()) - adapt.p_count() + 64;
}

// Catalog manifest: flat text lines "code_id path rate snr_threshold".
std::vector<CodeDescriptor> load_catalog(const std::string& manifest_path);
void save_catalog(const std::string& manifest_path, const std::vector<CodeDescriptor>& catalog);

}  // namespace cvqkd
