#include "cvqkd/ldpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cvqkd/bitops.hpp"
#include "cvqkd/mdr.hpp"
#include "cvqkd/parallel.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd {

SparseParityCheck::SparseParityCheck(std::uint32_t n, std::uint32_t m_rows,
                                     std::vector<std::vector<std::uint32_t>> rows)
    : n_(n), m_(m_rows) {
    if (rows.size() != m_rows) throw std::domain_error("SparseParityCheck: row count mismatch");
    if (m_rows == 0 || n == 0 || m_rows >= n)
        throw std::domain_error("SparseParityCheck: need 0 < m_rows < n");

    row_ptr_.assign(m_ + 1, 0);
    std::uint64_t edges = 0;
    for (std::uint32_t j = 0; j < m_; ++j) edges += rows[j].size();
    row_col_.reserve(edges);
    std::vector<std::uint32_t> col_deg(n_, 0);
    for (std::uint32_t j = 0; j < m_; ++j) {
        auto& r = rows[j];
        std::sort(r.begin(), r.end());
        for (std::size_t t = 0; t < r.size(); ++t) {
            if (r[t] >= n_) throw std::domain_error("SparseParityCheck: column out of range");
            if (t > 0 && r[t] == r[t - 1])
                throw std::domain_error("SparseParityCheck: duplicate edge");
            row_col_.push_back(r[t]);
            ++col_deg[r[t]];
        }
        row_ptr_[j + 1] = static_cast<std::uint32_t>(row_col_.size());
    }

    col_ptr_.assign(n_ + 1, 0);
    for (std::uint32_t i = 0; i < n_; ++i) col_ptr_[i + 1] = col_ptr_[i] + col_deg[i];
    col_edge_.assign(row_col_.size(), 0);
    std::vector<std::uint32_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::uint32_t j = 0; j < m_; ++j)
        for (std::uint32_t e = row_ptr_[j]; e < row_ptr_[j + 1]; ++e)
            col_edge_[cursor[row_col_[e]]++] = e;
}

DegreeSummary SparseParityCheck::degree_summary() const {
    DegreeSummary s;
    s.edges = edges();
    std::vector<std::uint32_t> vd(n_, 0), cd(m_, 0);
    for (std::uint32_t i = 0; i < n_; ++i) vd[i] = col_ptr_[i + 1] - col_ptr_[i];
    for (std::uint32_t j = 0; j < m_; ++j) cd[j] = row_ptr_[j + 1] - row_ptr_[j];
    auto histogram = [](const std::vector<std::uint32_t>& deg) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> h;
        std::vector<std::uint32_t> sorted = deg;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            h.emplace_back(sorted[i], static_cast<std::uint32_t>(j - i));
            i = j;
        }
        return h;
    };
    s.var_degrees = histogram(vd);
    s.check_degrees = histogram(cd);
    return s;
}

// ---------------------------------------------------------------------------
// alist I/O

namespace {

struct TokenReader {
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::int64_t next(const char* what) {
        for (;;) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) fail(std::string("unexpected end of file reading ") + what);
                ++lineno_;
                pos_ = 0;
                continue;
            }
            while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
            if (pos_ >= line_.size()) continue;
            std::size_t start = pos_;
            while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
            try {
                return std::stoll(line_.substr(start, pos_ - start));
            } catch (...) {
                fail(std::string("expected integer for ") + what);
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error("alist line " + std::to_string(lineno_) + ": " + msg);
    }

    std::istream& in_;
    std::string line_;
    std::size_t pos_ = 0;
    std::size_t lineno_ = 0;
};

}  // namespace

SparseParityCheck load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("load_code: cannot open " + path);
    TokenReader tok(in);

    const std::int64_t n = tok.next("n");
    const std::int64_t m = tok.next("m");
    if (n <= 0 || m <= 0 || m >= n) tok.fail("invalid dimensions");
    const std::int64_t max_vd = tok.next("max variable degree");
    const std::int64_t max_cd = tok.next("max check degree");
    if (max_vd <= 0 || max_cd <= 0) tok.fail("invalid maximum degrees");

    std::vector<std::int64_t> vd(n), cd(m);
    for (auto& d : vd) {
        d = tok.next("variable degree");
        if (d < 0 || d > max_vd) tok.fail("variable degree out of range");
    }
    for (auto& d : cd) {
        d = tok.next("check degree");
        if (d < 0 || d > max_cd) tok.fail("check degree out of range");
    }

    // Column adjacency (1-based, zero padded).
    std::vector<std::vector<std::uint32_t>> cols(n);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t t = 0; t < max_vd; ++t) {
            const std::int64_t v = tok.next("column entry");
            if (t < vd[i]) {
                if (v < 1 || v > m) tok.fail("check index out of range");
                cols[i].push_back(static_cast<std::uint32_t>(v - 1));
            } else if (v != 0) {
                tok.fail("expected zero padding");
            }
        }
    }
    std::vector<std::vector<std::uint32_t>> rows(m);
    for (std::int64_t j = 0; j < m; ++j) {
        for (std::int64_t t = 0; t < max_cd; ++t) {
            const std::int64_t v = tok.next("row entry");
            if (t < cd[j]) {
                if (v < 1 || v > n) tok.fail("variable index out of range");
                rows[j].push_back(static_cast<std::uint32_t>(v - 1));
            } else if (v != 0) {
                tok.fail("expected zero padding");
            }
        }
    }

    // The column view must be the exact transpose of the row view.
    std::vector<std::vector<std::uint32_t>> transpose(n);
    for (std::int64_t j = 0; j < m; ++j)
        for (std::uint32_t i : rows[j]) transpose[i].push_back(static_cast<std::uint32_t>(j));
    for (std::int64_t i = 0; i < n; ++i) {
        auto a = cols[i];
        auto b = transpose[i];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) tok.fail("row/column adjacency inconsistent at variable " + std::to_string(i + 1));
        for (std::size_t t = 1; t < a.size(); ++t)
            if (a[t] == a[t - 1]) tok.fail("duplicate edge at variable " + std::to_string(i + 1));
    }

    SparseParityCheck code(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m),
                           std::move(rows));
    code.meta.block_len = static_cast<std::uint64_t>(n);
    code.meta.rate = static_cast<double>(n - m) / static_cast<double>(n);
    code.meta.path = path;
    code.meta.code_id = std::filesystem::path(path).stem().string();
    return code;
}

void save_code(const std::string& path, const SparseParityCheck& code) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_code: cannot open " + path);
    const std::uint32_t n = code.n(), m = code.m_rows();
    std::vector<std::vector<std::uint32_t>> cols(n);
    std::uint32_t max_cd = 0;
    for (std::uint32_t j = 0; j < m; ++j) {
        const auto r = code.row_cols(j);
        max_cd = std::max<std::uint32_t>(max_cd, static_cast<std::uint32_t>(r.size()));
        for (std::uint32_t i : r) cols[i].push_back(j);
    }
    std::uint32_t max_vd = 0;
    for (auto& c : cols) max_vd = std::max<std::uint32_t>(max_vd, static_cast<std::uint32_t>(c.size()));

    out << n << ' ' << m << '\n' << max_vd << ' ' << max_cd << '\n';
    for (std::uint32_t i = 0; i < n; ++i) out << cols[i].size() << (i + 1 < n ? ' ' : '\n');
    for (std::uint32_t j = 0; j < m; ++j)
        out << code.row_cols(j).size() << (j + 1 < m ? ' ' : '\n');
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t t = 0; t < max_vd; ++t)
            out << (t < cols[i].size() ? cols[i][t] + 1 : 0) << (t + 1 < max_vd ? ' ' : '\n');
    }
    for (std::uint32_t j = 0; j < m; ++j) {
        const auto r = code.row_cols(j);
        for (std::uint32_t t = 0; t < max_cd; ++t)
            out << (t < r.size() ? r[t] + 1 : 0) << (t + 1 < max_cd ? ' ' : '\n');
    }
    if (!out) throw std::runtime_error("save_code: write failure");
}

std::vector<std::uint8_t> compute_syndrome(std::span<const std::uint8_t> bits,
                                           const SparseParityCheck& code) {
    if (bits.size() != code.n()) throw std::domain_error("compute_syndrome: length mismatch");
    std::vector<std::uint8_t> syndrome(code.m_rows(), 0);
    for (std::uint32_t j = 0; j < code.m_rows(); ++j) {
        std::uint8_t s = 0;
        for (std::uint32_t i : code.row_cols(j)) s ^= (bits[i] & 1);
        syndrome[j] = s;
    }
    return syndrome;
}

// ---------------------------------------------------------------------------
// Rate adaptation

double RateAdaptation::effective_rate(const SparseParityCheck& code) const {
    const double k = static_cast<double>(code.k()) - s_count();
    const double len = static_cast<double>(code.n()) - p_count() - s_count();
    return k / len;
}

RateAdaptation adapt_rate(const SparseParityCheck& code, double target_rate,
                          std::uint32_t constant, std::uint64_t seed) {
    const std::uint32_t n = code.n(), k = code.k();
    if (constant > n - 1) throw std::range_error("adapt_rate: constant exceeds block length");
    const double denom = static_cast<double>(n) - constant;

    RateAdaptation adapt;
    adapt.constant = constant;
    if (constant == 0) {
        if (std::abs(target_rate - static_cast<double>(k) / n) > 1e-9)
            throw std::range_error("adapt_rate: constant 0 only realizes the base rate " +
                                   std::to_string(static_cast<double>(k) / n));
        return adapt;
    }

    const double s_real = static_cast<double>(k) - target_rate * denom;
    const std::int64_t s = std::llround(s_real);
    const std::int64_t p = static_cast<std::int64_t>(constant) - s;
    const double r_lo = (static_cast<double>(k) - constant) / denom;
    const double r_hi = static_cast<double>(k) / denom;
    if (s < 0 || s > constant)
        throw std::range_error("adapt_rate: target outside achievable [" + std::to_string(std::max(0.0, r_lo)) +
                               ", " + std::to_string(r_hi) + "]");
    if (p > static_cast<std::int64_t>(n / 10))
        throw std::range_error("adapt_rate: punctured count exceeds 10% of block length");

    // Seeded sampling without replacement: first p positions punctured,
    // next s shortened.
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Xoshiro256 rng(derive_seed(seed, 0xada9d));
    const std::uint32_t take = static_cast<std::uint32_t>(p + s);
    for (std::uint32_t i = 0; i < take; ++i) {
        const std::uint64_t j = i + rng.below(n - i);
        std::swap(perm[i], perm[j]);
    }
    adapt.punctured.assign(perm.begin(), perm.begin() + p);
    adapt.shortened.assign(perm.begin() + p, perm.begin() + take);
    std::sort(adapt.punctured.begin(), adapt.punctured.end());
    std::sort(adapt.shortened.begin(), adapt.shortened.end());
    return adapt;
}

std::vector<double> place_llrs(std::span<const double> payload_llrs,
                               const SparseParityCheck& code, const RateAdaptation& adapt) {
    const std::uint32_t n = code.n();
    if (payload_llrs.size() != adapt.payload_symbols(code))
        throw std::domain_error("place_llrs: payload length mismatch");
    std::vector<double> llrs(n, 0.0);
    std::vector<std::uint8_t> special(n, 0);
    for (std::uint32_t i : adapt.punctured) special[i] = 1;
    for (std::uint32_t i : adapt.shortened) {
        if (special[i]) throw std::domain_error("place_llrs: punctured/shortened overlap");
        special[i] = 2;
        llrs[i] = kShortenedLlr;
    }
    std::size_t next = 0;
    for (std::uint32_t i = 0; i < n; ++i)
        if (special[i] == 0) llrs[i] = payload_llrs[next++];
    return llrs;
}

// ---------------------------------------------------------------------------
// Belief propagation

namespace {

// tanh(x/2) for x >= 0, and atanh with the same piecewise split. The
// polynomial branch covers the low-SNR bulk; one expf/logf handles the
// tails. Absolute error below 3e-7, well under message noise.
inline float tanh_half(float x) {
    if (x < 1.0f) {
        const float h = 0.5f * x;
        const float h2 = h * h;
        return h * (1.0f - h2 * (1.0f / 3.0f) + h2 * h2 * (2.0f / 15.0f));
    }
    if (x > 33.0f) return 1.0f;
    return 1.0f - 2.0f / (std::exp(x) + 1.0f);
}

inline float atanh_clamped(float y, float clamp) {
    const float a = std::fabs(y);
    float r;
    if (a < 0.4f) {
        const float y2 = a * a;
        r = a * (1.0f + y2 * (1.0f / 3.0f + y2 * (1.0f / 5.0f + y2 * (1.0f / 7.0f))));
        r *= 2.0f;
    } else if (a >= 1.0f - 1e-7f) {
        r = clamp;
    } else {
        r = std::log((1.0f + a) / (1.0f - a));
    }
    if (r > clamp) r = clamp;
    return y < 0 ? -r : r;
}

}  // namespace

DecodeResult bp_decode(std::span<const double> llrs, std::span<const std::uint8_t> syndrome,
                       const SparseParityCheck& code, const RateAdaptation& adapt,
                       const DecoderOptions& opts) {
    const std::uint32_t n = code.n(), m = code.m_rows();
    if (llrs.size() != n) throw std::domain_error("bp_decode: llr length mismatch");
    if (syndrome.size() != m) throw std::domain_error("bp_decode: syndrome length mismatch");

    const float clamp = opts.llr_clamp;
    const std::uint64_t edges = code.edges();

    // Frozen variables (shortened, known zero) pin their messages at +clamp.
    std::vector<std::uint8_t> frozen(n, 0);
    for (std::uint32_t i : adapt.shortened) frozen[i] = 1;

    std::vector<float> prior(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        double v = llrs[i];
        if (v >= kShortenedLlr * 0.5 || frozen[i]) {
            prior[i] = clamp;
            frozen[i] = 1;
        } else {
            prior[i] = std::clamp(static_cast<float>(v), -clamp, clamp);
        }
    }

    std::vector<float> v2c(edges), c2v(edges, 0.0f);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t e : code.col_edges(i)) v2c[e] = prior[i];

    DecodeResult result;
    result.bits.assign(n, 0);

    std::uint32_t max_row = 0;
    for (std::uint32_t j = 0; j < m; ++j)
        max_row = std::max<std::uint32_t>(max_row, static_cast<std::uint32_t>(code.row_cols(j).size()));
    std::vector<float> fwd(max_row), bwd(max_row), tn(max_row);

    const auto row_ptr = code.row_ptr();

    for (std::uint32_t iter = 1; iter <= opts.max_iters; ++iter) {
        // Check-node update with the target syndrome folded into the sign.
        for (std::uint32_t j = 0; j < m; ++j) {
            const std::uint32_t begin = row_ptr[j], end = row_ptr[j + 1];
            const std::uint32_t deg = end - begin;
            if (deg == 0) continue;
            float sign = syndrome[j] ? -1.0f : 1.0f;
            for (std::uint32_t t = 0; t < deg; ++t) {
                const float v = v2c[begin + t];
                tn[t] = v < 0 ? -tanh_half(-v) : tanh_half(v);
            }
            if (deg == 1) {
                c2v[begin] = sign * clamp;
                continue;
            }
            fwd[0] = tn[0];
            bwd[deg - 1] = tn[deg - 1];
            for (std::uint32_t t = 1; t < deg; ++t) {
                fwd[t] = fwd[t - 1] * tn[t];
                bwd[deg - 1 - t] = bwd[deg - t] * tn[deg - 1 - t];
            }
            c2v[begin] = atanh_clamped(sign * bwd[1], clamp);
            c2v[begin + deg - 1] = atanh_clamped(sign * fwd[deg - 2], clamp);
            for (std::uint32_t t = 1; t + 1 < deg; ++t)
                c2v[begin + t] = atanh_clamped(sign * fwd[t - 1] * bwd[t + 1], clamp);
        }

        // Variable-node update and hard decision.
        for (std::uint32_t i = 0; i < n; ++i) {
            if (frozen[i]) {
                result.bits[i] = 0;
                continue;
            }
            const auto ce = code.col_edges(i);
            float total = prior[i];
            for (std::uint32_t e : ce) total += c2v[e];
            result.bits[i] = total < 0.0f ? 1 : 0;
            for (std::uint32_t e : ce)
                v2c[e] = std::clamp(total - c2v[e], -clamp, clamp);
        }

        // Early termination on syndrome match.
        bool ok = true;
        for (std::uint32_t j = 0; j < m && ok; ++j) {
            std::uint8_t s = 0;
            for (std::uint32_t e = row_ptr[j]; e < row_ptr[j + 1]; ++e)
                s ^= result.bits[code.edge_col(e)];
            ok = (s == syndrome[j]);
        }
        result.iterations = iter;
        if (ok) {
            result.converged = true;
            result.syndrome_ok = true;
            return result;
        }
    }
    result.syndrome_ok = false;
    return result;
}

// ---------------------------------------------------------------------------
// Efficiency measurement over the MDR virtual channel

EfficiencyReport measure_efficiency(const SparseParityCheck& code, const RateAdaptation& adapt,
                                    double snr_value, std::uint32_t trials, std::uint64_t seed,
                                    const DecoderOptions& opts) {
    if (trials < 100) throw std::domain_error("measure_efficiency: need at least 100 trials");
    if (!(snr_value > 0)) throw std::domain_error("measure_efficiency: snr must be > 0");

    const std::uint32_t payload = adapt.payload_symbols(code);
    const std::uint32_t blocks = payload / 8;
    if (blocks * 8 != payload)
        throw std::domain_error("measure_efficiency: payload symbols must be a multiple of 8");

    const double amp = std::sqrt(snr_value);  // noise normalized to 1 SNU

    std::vector<std::uint8_t> failures(trials, 0);
    std::vector<std::uint32_t> iters(trials, 0);
    const auto t0 = std::chrono::steady_clock::now();

    parallel_for(0, trials, [&](std::uint64_t trial) {
        Xoshiro256 rng(derive_seed(seed, trial));
        std::vector<std::uint8_t> u(code.n(), 0);
        std::vector<double> payload_llrs(payload);

        // Bob's random bits everywhere (punctured included); shortened stay 0.
        std::vector<std::uint8_t> special(code.n(), 0);
        for (std::uint32_t i : adapt.punctured) special[i] = 1;
        for (std::uint32_t i : adapt.shortened) special[i] = 2;
        for (std::uint32_t i = 0; i < code.n(); ++i)
            if (special[i] != 2) u[i] = static_cast<std::uint8_t>(rng.coin());

        // Payload bits ride the virtual channel in MDR blocks of 8.
        std::vector<std::uint32_t> payload_pos;
        payload_pos.reserve(payload);
        for (std::uint32_t i = 0; i < code.n(); ++i)
            if (special[i] == 0) payload_pos.push_back(i);

        for (std::uint32_t b = 0; b < blocks; ++b) {
            std::array<double, 8> x, y;
            std::uint8_t ubits = 0;
            for (int t = 0; t < 8; ++t) {
                x[t] = amp * sample_normal(rng);
                y[t] = x[t] + sample_normal(rng);
                ubits |= static_cast<std::uint8_t>(u[payload_pos[8 * b + t]] & 1) << t;
            }
            const Octonion r = mdr_encode(std::span<const double, 8>(y), ubits);
            const auto llr8 = mdr_llrs(std::span<const double, 8>(x), r, 1.0, 1.0);
            for (int t = 0; t < 8; ++t) payload_llrs[8 * b + t] = llr8[t];
        }

        const auto syndrome = compute_syndrome(u, code);
        const auto llrs = place_llrs(payload_llrs, code, adapt);
        const DecodeResult res = bp_decode(llrs, syndrome, code, adapt, opts);
        iters[trial] = res.iterations;

        bool match = res.converged;
        if (match) {
            for (std::uint32_t i : payload_pos)
                if (res.bits[i] != u[i]) { match = false; break; }
        }
        failures[trial] = match ? 0 : 1;
    });

    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    EfficiencyReport rep;
    rep.trials = trials;
    rep.r_eff = adapt.effective_rate(code);
    rep.fer = std::accumulate(failures.begin(), failures.end(), 0.0) / trials;
    rep.beta = rep.r_eff / mutual_information(snr_value);
    rep.avg_iterations = std::accumulate(iters.begin(), iters.end(), 0.0) / trials;
    rep.symbols_per_second = secs > 0 ? static_cast<double>(code.n()) * trials / secs : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Verification hash

std::uint64_t verification_hash(std::span<const std::uint8_t> bits, std::uint64_t seed) {
    // Pack to 64-bit words, then evaluate the message polynomial at a
    // seed-derived point of GF(2^64) (Horner). A nonzero point detects any
    // single-word difference with certainty and random corruption with
    // probability 1 - deg/2^64.
    std::uint64_t sm = derive_seed(seed, 0x9e37);
    std::uint64_t point = 0;
    while (point == 0) point = splitmix64(sm);

    std::uint64_t acc = 0;
    std::uint64_t word = 0;
    int fill = 0;
    auto push = [&](std::uint64_t w) { acc = gf64_mul(acc, point) ^ w; };
    for (std::size_t i = 0; i < bits.size(); ++i) {
        word |= static_cast<std::uint64_t>(bits[i] & 1) << fill;
        if (++fill == 64) {
            push(word);
            word = 0;
            fill = 0;
        }
    }
    if (fill > 0) push(word);
    push(static_cast<std::uint64_t>(bits.size()));  // length binding
    return acc;
}

bool verify_blocks(std::span<const std::uint8_t> alice_bits,
                   std::span<const std::uint8_t> bob_bits, std::uint64_t seed) {
    if (alice_bits.size() != bob_bits.size())
        throw std::domain_error("verify_blocks: length mismatch");
    return verification_hash(alice_bits, seed) == verification_hash(bob_bits, seed);
}

// ---------------------------------------------------------------------------
// Catalog manifest

std::vector<CodeDescriptor> load_catalog(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw parse_error("load_catalog: cannot open " + manifest_path);
    const auto dir = std::filesystem::path(manifest_path).parent_path();
    std::vector<CodeDescriptor> catalog;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        CodeDescriptor d;
        std::string rel;
        if (!(ss >> d.code_id >> rel >> d.rate >> d.snr_threshold))
            throw parse_error("load_catalog line " + std::to_string(lineno) + ": expected 'code_id path rate snr_threshold'");
        if (!(d.rate > 0 && d.rate < 1) || !(d.snr_threshold > 0))
            throw parse_error("load_catalog line " + std::to_string(lineno) + ": rate/threshold out of range");
        d.path = (dir / rel).string();
        d.block_len = 0;  // filled on load
        catalog.push_back(std::move(d));
    }
    if (catalog.empty()) throw parse_error("load_catalog: empty manifest " + manifest_path);
    return catalog;
}

void save_catalog(const std::string& manifest_path, const std::vector<CodeDescriptor>& catalog) {
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error("save_catalog: cannot open " + manifest_path);
    out << "# code_id path rate snr_threshold\n";
    const auto dir = std::filesystem::path(manifest_path).parent_path();
    for (const auto& d : catalog) {
        const auto rel = std::filesystem::relative(d.path, dir);
        out << d.code_id << ' ' << rel.string() << ' ' << d.rate << ' ' << d.snr_threshold << '\n';
    }
}

}  // namespace cvqkd
