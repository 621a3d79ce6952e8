// Command-line front end: sessions, figure sweeps, catalog inspection and
// the standalone reconciliation / privacy-amplification paths.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cvqkd/ldpc.hpp"
#include "cvqkd/ldpc_build.hpp"
#include "cvqkd/mdr.hpp"
#include "cvqkd/pipeline.hpp"
#include "cvqkd/privamp.hpp"
#include "cvqkd/rng.hpp"

namespace {

// Exit codes: 0 success, 2 config/parse, 3 estimation failure, 4 no code,
// 5 other runtime error.
constexpr int kExitParse = 2;
constexpr int kExitEstimation = 3;
constexpr int kExitNoCode = 4;
constexpr int kExitRuntime = 5;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

std::vector<std::uint8_t> read_bitfile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int i = 0; i < 8; ++i) bits.push_back((b >> i) & 1);
    return bits;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-variable QKD post-processing laboratory"};
    app.require_subcommand(1);

    // --- simulate
    auto* sim = app.add_subcommand("simulate", "Run a full session and write the report");
    std::string sim_config, sim_out, sim_frames_out, sim_key_out;
    std::uint64_t sim_seed = 0;
    double sim_distance = -1.0;
    std::uint64_t sim_pulses = 0;
    std::string sim_catalog;
    sim->add_option("--config", sim_config, "Session config file (key = value)");
    sim->add_option("--seed", sim_seed, "Seed (required for reproducibility)")->required();
    sim->add_option("--distance-km", sim_distance, "Override distance");
    sim->add_option("--pulses", sim_pulses, "Override pulse count");
    sim->add_option("--catalog", sim_catalog, "Override catalog manifest path");
    sim->add_option("--report", sim_out, "Report output file (default stdout)");
    sim->add_option("--key-out", sim_key_out, "Write the finite-mode key (raw) + sidecar");

    // --- sweep-rates
    auto* sr = app.add_subcommand("sweep-rates", "Figure-2 style analytic rate sweep CSV");
    std::string sr_config, sr_out = "rates.csv";
    std::vector<double> sr_distances;
    std::uint64_t sr_seed = 0;
    double sr_xi = 0.002;
    std::string sr_catalog;
    sr->add_option("--config", sr_config, "Base config file");
    sr->add_option("--seed", sr_seed, "Seed")->required();
    sr->add_option("--distances", sr_distances, "Distances in km")->expected(-1);
    sr->add_option("--xi", sr_xi, "Assumed excess noise");
    sr->add_option("--catalog", sr_catalog, "Catalog manifest");
    sr->add_option("--out", sr_out, "Output CSV");

    // --- sweep-noise
    auto* sn = app.add_subcommand("sweep-noise", "Figure-3 style excess-noise scatter CSV");
    std::string sn_config, sn_out = "noise.csv";
    std::vector<double> sn_blocks{1e6, 1e8};
    std::uint32_t sn_reps = 20;
    std::uint64_t sn_seed = 0;
    sn->add_option("--config", sn_config, "Base config file");
    sn->add_option("--seed", sn_seed, "Seed")->required();
    sn->add_option("--block-sizes", sn_blocks, "Equivalent block sizes")->expected(-1);
    sn->add_option("--repetitions", sn_reps, "Monte Carlo repetitions");
    sn->add_option("--out", sn_out, "Output CSV");

    // --- codes
    auto* codes = app.add_subcommand("codes", "Inspect or generate the code catalog");
    std::string codes_manifest, codes_gen_dir;
    std::uint64_t codes_seed = 20120815;
    codes->add_option("--catalog", codes_manifest, "Manifest to inspect");
    codes->add_option("--generate", codes_gen_dir, "Generate the desk catalog into a directory");
    codes->add_option("--seed", codes_seed, "Generation seed");

    // --- hash
    auto* hash = app.add_subcommand("hash", "Standalone Toeplitz privacy amplification");
    std::string hash_in, hash_out = "key.bin";
    std::uint64_t hash_seed = 0, hash_lout = 0;
    hash->add_option("--in", hash_in, "Input bit file (raw bytes, LSB first)")->required();
    hash->add_option("--seed", hash_seed, "Toeplitz PRNG seed")->required();
    hash->add_option("--l-out", hash_lout, "Output length in bits")->required();
    hash->add_option("--out", hash_out, "Output key file");

    // --- decode
    auto* dec = app.add_subcommand("decode", "Standalone reconciliation on saved frames");
    std::string dec_frames, dec_code, dec_out = "decoded.txt";
    std::uint64_t dec_seed = 0;
    double dec_sigma2 = 1.015, dec_tslope = 0.22;
    std::uint32_t dec_iters = 200;
    dec->add_option("--frames", dec_frames, "Frame file from simulate")->required();
    dec->add_option("--code", dec_code, "alist code file")->required();
    dec->add_option("--seed", dec_seed, "Seed for Bob's bits")->required();
    dec->add_option("--sigma2", dec_sigma2, "Total noise at Bob, SNU");
    dec->add_option("--t-slope", dec_tslope, "sqrt(eta T)");
    dec->add_option("--max-iters", dec_iters, "BP iteration cap");
    dec->add_option("--out", dec_out, "Decode report output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            cvqkd::SessionConfig config;
            if (!sim_config.empty()) config = cvqkd::load_config_file(sim_config);
            config.seed = sim_seed;
            if (sim_distance >= 0) config.distance_km = sim_distance;
            if (sim_pulses > 0) config.pulses = sim_pulses;
            if (!sim_catalog.empty()) config.catalog_path = sim_catalog;
            const auto report = cvqkd::run_session(config);
            const std::string text = report.to_text();
            if (sim_out.empty())
                std::cout << text;
            else
                write_text(sim_out, text);
            if (!sim_key_out.empty()) {
                std::ofstream key(sim_key_out, std::ios::binary);
                key.write(reinterpret_cast<const char*>(report.key_finite.data()),
                          static_cast<std::streamsize>(report.key_finite.size()));
                std::ostringstream side;
                side << "session_seed = " << report.seed
                     << "\nl_out = " << report.finite.key_length
                     << "\ntoeplitz_prng = " << report.toeplitz_prng
                     << "\ntoeplitz_seed = " << report.toeplitz_seed
                     << "\nleak_ec = " << report.leak_ec << "\nchi_worst = " << report.finite.chi_be
                     << "\ndelta = " << report.finite.delta << '\n';
                write_text(sim_key_out + ".txt", side.str());
            }
        } else if (*sr) {
            cvqkd::SessionConfig config;
            if (!sr_config.empty()) config = cvqkd::load_config_file(sr_config);
            config.seed = sr_seed;
            config.xi_true = sr_xi;
            if (!sr_catalog.empty()) config.catalog_path = sr_catalog;
            if (sr_distances.empty()) sr_distances = {25.0, 53.0, 80.5};
            const auto rows = cvqkd::sweep_figure2(config, sr_distances);
            write_text(sr_out, cvqkd::sweep_figure2_csv(rows));
            std::cout << "wrote " << rows.size() << " rows to " << sr_out << '\n';
        } else if (*sn) {
            cvqkd::SessionConfig config;
            if (!sn_config.empty()) config = cvqkd::load_config_file(sn_config);
            config.seed = sn_seed;
            const auto rows = cvqkd::sweep_figure3(config, sn_blocks, sn_reps);
            write_text(sn_out, cvqkd::sweep_figure3_csv(rows));
            std::cout << "wrote " << rows.size() << " rows to " << sn_out << '\n';
        } else if (*codes) {
            if (!codes_gen_dir.empty()) {
                const std::string manifest = cvqkd::generate_catalog(codes_gen_dir, codes_seed);
                std::cout << "catalog manifest: " << manifest << '\n';
                codes_manifest = manifest;
            }
            if (!codes_manifest.empty()) {
                for (const auto& d : cvqkd::load_catalog(codes_manifest)) {
                    const auto code = cvqkd::load_code(d.path);
                    const auto summary = code.degree_summary();
                    std::cout << d.code_id << ": n=" << code.n() << " m=" << code.m_rows()
                              << " rate=" << d.rate << " snr_threshold=" << d.snr_threshold
                              << " edges=" << summary.edges << "\n  var degrees:";
                    for (auto [deg, cnt] : summary.var_degrees)
                        std::cout << ' ' << deg << 'x' << cnt;
                    std::cout << "\n  check degrees:";
                    for (auto [deg, cnt] : summary.check_degrees)
                        std::cout << ' ' << deg << 'x' << cnt;
                    std::cout << '\n';
                }
            } else {
                std::cerr << "codes: pass --catalog and/or --generate\n";
                return kExitParse;
            }
        } else if (*hash) {
            const auto bits = read_bitfile(hash_in);
            const cvqkd::ToeplitzSeed seed{hash_seed, bits.size(), hash_lout};
            const auto key = cvqkd::toeplitz_hash(cvqkd::BitVector::from_bytes(bits), seed);
            std::ofstream out(hash_out, std::ios::binary);
            for (std::size_t w = 0; w < key.words.size(); ++w)
                out.write(reinterpret_cast<const char*>(&key.words[w]),
                          static_cast<std::streamsize>(std::min<std::size_t>(8, (key.nbits + 7) / 8 - 8 * w)));
            std::cout << "hashed " << bits.size() << " -> " << hash_lout << " bits\n";
        } else if (*dec) {
            const auto frames = cvqkd::read_frames_file(dec_frames);
            const auto code = cvqkd::load_code(dec_code);
            std::vector<double> xs, ys;
            for (const auto& f : frames) {
                if (f.role != cvqkd::Role::key) continue;
                xs.push_back(f.phi_choice == cvqkd::Quadrature::q ? f.alice_q : f.alice_p);
                ys.push_back(f.bob_value);
            }
            const std::uint64_t nframes = xs.size() / code.n();
            std::ostringstream rep;
            std::uint64_t ok = 0;
            for (std::uint64_t fidx = 0; fidx < nframes; ++fidx) {
                cvqkd::Xoshiro256 rng(cvqkd::derive_seed(dec_seed, 100 + fidx));
                std::vector<std::uint8_t> u(code.n());
                for (auto& b : u) b = static_cast<std::uint8_t>(rng.coin());
                std::vector<double> llrs(code.n());
                for (std::uint32_t blk = 0; blk < code.n() / 8; ++blk) {
                    std::array<double, 8> x, y;
                    std::uint8_t ubits = 0;
                    for (int t = 0; t < 8; ++t) {
                        const std::uint64_t i = fidx * code.n() + 8 * blk + t;
                        x[t] = xs[i];
                        y[t] = ys[i];
                        ubits |= static_cast<std::uint8_t>(u[8 * blk + t] & 1) << t;
                    }
                    const auto r = cvqkd::mdr_encode(std::span<const double, 8>(y), ubits);
                    const auto llr8 =
                        cvqkd::mdr_llrs(std::span<const double, 8>(x), r, dec_sigma2, dec_tslope);
                    for (int t = 0; t < 8; ++t) llrs[8 * blk + t] = llr8[t];
                }
                const auto syndrome = cvqkd::compute_syndrome(u, code);
                cvqkd::DecoderOptions opts;
                opts.max_iters = dec_iters;
                const auto res = cvqkd::bp_decode(llrs, syndrome, code, cvqkd::RateAdaptation{}, opts);
                const bool match =
                    res.converged && cvqkd::verify_blocks(res.bits, u, cvqkd::derive_seed(dec_seed, 500 + fidx));
                ok += match ? 1 : 0;
                rep << "frame " << fidx << ": converged=" << res.converged
                    << " iters=" << res.iterations << " verified=" << match << '\n';
            }
            rep << "frames=" << nframes << " verified=" << ok << '\n';
            write_text(dec_out, rep.str());
            std::cout << rep.str();
        }
    } catch (const cvqkd::parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const cvqkd::estimation_failure& e) {
        std::cerr << "estimation failure: " << e.what() << '\n';
        return kExitEstimation;
    } catch (const cvqkd::no_code_error& e) {
        std::cerr << "no feasible code: " << e.what() << '\n';
        return kExitNoCode;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
