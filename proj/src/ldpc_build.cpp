#include "cvqkd/ldpc_build.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <unordered_set>

#include "cvqkd/rng.hpp"

namespace cvqkd {

namespace {

// Largest-remainder rounding of node fractions to integer counts.
std::vector<std::uint32_t> apportion(const std::vector<double>& fractions, std::uint32_t total) {
    std::vector<std::uint32_t> counts(fractions.size());
    std::vector<std::pair<double, std::size_t>> rem(fractions.size());
    std::uint32_t assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double exact = fractions[i] * total;
        counts[i] = static_cast<std::uint32_t>(exact);
        rem[i] = {exact - counts[i], i};
        assigned += counts[i];
    }
    std::sort(rem.begin(), rem.end(), std::greater<>());
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++counts[rem[i % rem.size()].second];
    return counts;
}

// Incremental bipartite graph over (vars, checks) used during placement.
struct Builder {
    std::uint32_t n_vars, n_checks;
    std::vector<std::vector<std::uint32_t>> var_checks;
    std::vector<std::vector<std::uint32_t>> check_vars;
    std::vector<std::uint32_t> check_deg;

    // stamp arrays for BFS
    std::vector<std::uint32_t> check_stamp, var_stamp;
    std::uint32_t stamp = 0;

    Builder(std::uint32_t nv, std::uint32_t nc)
        : n_vars(nv), n_checks(nc), var_checks(nv), check_vars(nc), check_deg(nc, 0),
          check_stamp(nc, 0), var_stamp(nv, 0) {}

    void add(std::uint32_t v, std::uint32_t c) {
        var_checks[v].push_back(c);
        check_vars[c].push_back(v);
        ++check_deg[c];
    }

    // Marks checks at graph distance 1 and 3 from v (those that would
    // close a 2- or 4-cycle), and optionally distance 5 (6-cycle).
    void mark_forbidden(std::uint32_t v, bool depth5) {
        ++stamp;
        for (std::uint32_t c : var_checks[v]) check_stamp[c] = stamp;
        for (std::uint32_t c : var_checks[v])
            for (std::uint32_t v2 : check_vars[c]) {
                if (var_stamp[v2] == stamp) continue;
                var_stamp[v2] = stamp;
                for (std::uint32_t c2 : var_checks[v2]) check_stamp[c2] = stamp;
            }
        if (!depth5) return;
        // one more (var, check) layer, bounded exploration
        std::uint32_t explored = 0;
        for (std::uint32_t c : var_checks[v]) {
            for (std::uint32_t v2 : check_vars[c]) {
                for (std::uint32_t c2 : var_checks[v2]) {
                    for (std::uint32_t v3 : check_vars[c2]) {
                        if (var_stamp[v3] == stamp) continue;
                        var_stamp[v3] = stamp;
                        for (std::uint32_t c3 : var_checks[v3]) check_stamp[c3] = stamp;
                        if (++explored > 20000) return;
                    }
                }
            }
        }
    }

    bool forbidden(std::uint32_t c) const { return check_stamp[c] == stamp; }
};

// Progressive placement of `deg` edges from variable v into checks
// [first, first+count): sample candidates, drop those closing short
// cycles, prefer the lowest-degree check.
void place_var_edges(Builder& b, Xoshiro256& rng, std::uint32_t v, std::uint32_t deg,
                     std::uint32_t first, std::uint32_t count) {
    for (std::uint32_t t = 0; t < deg; ++t) {
        b.mark_forbidden(v, /*depth5=*/true);
        std::uint32_t best = UINT32_MAX;
        std::uint32_t best_deg = UINT32_MAX;
        const std::uint32_t tries = count < 96 ? count : 96;
        for (std::uint32_t s = 0; s < tries; ++s) {
            const std::uint32_t c =
                count < 96 ? first + s : first + static_cast<std::uint32_t>(rng.below(count));
            if (b.forbidden(c)) continue;
            if (b.check_deg[c] < best_deg) {
                best = c;
                best_deg = b.check_deg[c];
            }
        }
        if (best == UINT32_MAX) {
            // fall back to 4-cycle avoidance only, then to anything
            b.mark_forbidden(v, /*depth5=*/false);
            for (std::uint32_t s = 0; s < 4 * tries; ++s) {
                const std::uint32_t c = first + static_cast<std::uint32_t>(rng.below(count));
                if (b.forbidden(c)) continue;
                if (b.check_deg[c] < best_deg) {
                    best = c;
                    best_deg = b.check_deg[c];
                }
            }
        }
        if (best == UINT32_MAX) {
            do {
                best = first + static_cast<std::uint32_t>(rng.below(count));
            } while (std::find(b.var_checks[v].begin(), b.var_checks[v].end(), best) !=
                     b.var_checks[v].end());
        }
        b.add(v, best);
    }
}

}  // namespace

SparseParityCheck build_met_code(const MetProfile& p, std::uint64_t seed) {
    if (p.n == 0 || p.k == 0 || p.k >= p.n) throw std::domain_error("build_met_code: bad profile dims");
    if (p.n_ext > 0 && p.d_ext == 0) throw std::domain_error("build_met_code: extension needs d_ext");
    if (p.n_ext >= p.n) throw std::domain_error("build_met_code: too many extension variables");
    const std::uint32_t n_core = p.n_core();
    const std::uint32_t m_core = p.m_core();
    const std::uint32_t m_total = p.m_total();
    if (m_core == 0) throw std::domain_error("build_met_code: no core checks");

    Xoshiro256 rng(derive_seed(seed, 0xc0de));

    // Core variable degrees.
    std::vector<double> fracs;
    for (auto& [d, f] : p.core_degrees) fracs.push_back(f);
    const auto counts = apportion(fracs, n_core);
    std::vector<std::uint32_t> var_deg(n_core);
    {
        std::size_t at = 0;
        for (std::size_t g = 0; g < counts.size(); ++g)
            for (std::uint32_t c = 0; c < counts[g]; ++c) var_deg[at++] = p.core_degrees[g].first;
        // Shuffle so degree classes are spread over positions.
        for (std::uint32_t i = n_core - 1; i > 0; --i)
            std::swap(var_deg[i], var_deg[rng.below(i + 1)]);
    }

    Builder b(n_core, m_core);

    // Place high-degree variables first (classic PEG ordering).
    std::vector<std::uint32_t> order(n_core);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t c) { return var_deg[a] > var_deg[c]; });
    for (std::uint32_t v : order) place_var_edges(b, rng, v, var_deg[v], 0, m_core);

    // Extension: check m_core + j joins the degree-1 variable n_core + j
    // with d_ext core variables, spread evenly over the core with
    // pairwise-collision avoidance.
    std::vector<std::vector<std::uint32_t>> ext_members(p.n_ext);
    if (p.n_ext > 0) {
        std::vector<std::uint32_t> pool;
        pool.reserve(static_cast<std::size_t>(p.n_ext) * p.d_ext);
        for (std::uint64_t t = 0; t < static_cast<std::uint64_t>(p.n_ext) * p.d_ext; ++t)
            pool.push_back(static_cast<std::uint32_t>(t % n_core));
        for (std::size_t i = pool.size() - 1; i > 0; --i)
            std::swap(pool[i], pool[rng.below(i + 1)]);

        std::unordered_set<std::uint64_t> used_pairs;
        used_pairs.reserve(pool.size() * 2);
        auto pair_key = [](std::uint32_t a, std::uint32_t c) {
            if (a > c) std::swap(a, c);
            return (static_cast<std::uint64_t>(a) << 32) | c;
        };

        std::size_t cursor = 0;
        for (std::uint32_t j = 0; j < p.n_ext; ++j) {
            auto& members = ext_members[j];
            members.reserve(p.d_ext);
            for (std::uint32_t t = 0; t < p.d_ext; ++t) {
                std::size_t pick = cursor;
                for (int attempt = 0; attempt < 64; ++attempt) {
                    const std::uint32_t cand = pool[pick];
                    bool ok = std::find(members.begin(), members.end(), cand) == members.end();
                    for (std::uint32_t mvar : members)
                        if (ok && used_pairs.count(pair_key(mvar, cand))) ok = false;
                    if (ok) break;
                    pick = cursor + rng.below(pool.size() - cursor);
                }
                std::swap(pool[cursor], pool[pick]);
                const std::uint32_t chosen = pool[cursor++];
                for (std::uint32_t mvar : members) used_pairs.insert(pair_key(mvar, chosen));
                members.push_back(chosen);
            }
        }
    }

    // Assemble rows: core checks first, then extension checks.
    std::vector<std::vector<std::uint32_t>> rows(m_total);
    for (std::uint32_t c = 0; c < m_core; ++c) rows[c] = std::move(b.check_vars[c]);
    for (std::uint32_t j = 0; j < p.n_ext; ++j) {
        auto& row = rows[m_core + j];
        row = std::move(ext_members[j]);
        row.push_back(n_core + j);
    }

    SparseParityCheck code(p.n, m_total, std::move(rows));
    code.meta.code_id = p.code_id;
    code.meta.rate = static_cast<double>(p.k) / p.n;
    code.meta.snr_threshold = p.snr_threshold;
    code.meta.block_len = p.n;
    return code;
}

std::vector<MetProfile> desk_catalog_profiles() {
    std::vector<MetProfile> profiles;

    // Base rate 0.5, plain irregular code. Threshold measured over the
    // MDR virtual channel at FER ~ 10% (n = 2^16, 200 iterations).
    {
        MetProfile p;
        p.code_id = "desk-r050-n16";
        p.n = 65536;
        p.k = 32768;
        p.core_degrees = {{2, 0.475}, {3, 0.30}, {7, 0.10}, {10, 0.125}};
        p.adapt_constant = 6554;
        p.snr_threshold = 1.280;
        profiles.push_back(std::move(p));
    }

    // Base rate 0.1: multi-edge core plus degree-1 extension.
    {
        MetProfile p;
        p.code_id = "desk-r010-n16";
        p.n = 65536;
        p.k = 6554;
        p.n_ext = 49152;
        p.d_ext = 3;
        p.core_degrees = {{2, 0.46}, {3, 0.34}, {11, 0.20}};
        p.adapt_constant = 655;
        p.snr_threshold = 0.175;
        profiles.push_back(std::move(p));
    }

    // Base rate 0.05: same structure, deeper extension.
    {
        MetProfile p;
        p.code_id = "desk-r005-n16";
        p.n = 65536;
        p.k = 3277;
        p.n_ext = 55706;
        p.d_ext = 3;
        p.core_degrees = {{2, 0.46}, {3, 0.34}, {11, 0.20}};
        p.adapt_constant = 655;
        p.snr_threshold = 0.088;
        profiles.push_back(std::move(p));
    }
    return profiles;
}

std::string generate_catalog(const std::string& directory, std::uint64_t seed, bool force) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const std::string manifest = (fs::path(directory) / "catalog.txt").string();

    const auto profiles = desk_catalog_profiles();
    bool complete = fs::exists(manifest);
    for (const auto& p : profiles)
        complete = complete && fs::exists(fs::path(directory) / (p.code_id + ".alist"));
    if (complete && !force) return manifest;

    std::vector<CodeDescriptor> catalog;
    for (const auto& p : profiles) {
        const auto code = build_met_code(p, derive_seed(seed, std::hash<std::string>{}(p.code_id)));
        const std::string path = (fs::path(directory) / (p.code_id + ".alist")).string();
        save_code(path, code);
        CodeDescriptor d = code.meta;
        d.path = path;
        catalog.push_back(std::move(d));
    }
    save_catalog(manifest, catalog);
    return manifest;
}

}  // namespace cvqkd
