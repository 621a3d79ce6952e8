#include "cvqkd/simulator.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cvqkd/parallel.hpp"

namespace cvqkd {

void ModulationGrid::validate() const {
    if (!(truncation >= 5.0)) throw std::domain_error("ModulationGrid: truncation below 5 sigma");
    if (bits < 4) throw std::domain_error("ModulationGrid: fewer than 4 bits");
}

double ModulationGrid::step(double v_a) const {
    return 2.0 * truncation * std::sqrt(v_a) / static_cast<double>(1ULL << bits);
}

void SiftFractions::validate() const {
    if (!(shot_noise >= 0 && shot_noise <= 1) || !(param_est >= 0 && param_est <= 1))
        throw std::domain_error("SiftFractions: fractions outside [0,1]");
}

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

// Truncated, discretized Gaussian component: continuous draw by CDF
// inversion, clamped at the truncation boundary, rounded to the nearest
// of the 2^bits cell centers spanning [-trunc*sigma, +trunc*sigma].
double quantize(double x, double half_width, double step) {
    if (x > half_width) x = half_width;
    if (x < -half_width) x = -half_width;
    double cell = std::floor((x + half_width) / step);
    const double levels = 2.0 * half_width / step;
    if (cell >= levels) cell = levels - 1.0;
    if (cell < 0) cell = 0.0;
    return -half_width + (cell + 0.5) * step;
}

}  // namespace

std::vector<std::pair<double, double>> generate_modulation(std::uint64_t n, double v_a,
                                                           const ModulationGrid& grid,
                                                           std::uint64_t seed) {
    if (n < 1) throw std::domain_error("generate_modulation: n must be >= 1");
    if (!(v_a > 0)) throw std::domain_error("generate_modulation: v_a must be > 0");
    grid.validate();

    const double sigma = std::sqrt(v_a);
    const double half_width = grid.truncation * sigma;
    const double step = grid.step(v_a);

    std::vector<std::pair<double, double>> out(n);
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(0, chunks, [&](std::uint64_t c) {
        Xoshiro256 rng(derive_seed(seed, c));
        const std::uint64_t lo = c * kChunk;
        const std::uint64_t hi = std::min(n, lo + kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double q = sigma * sample_normal(rng);
            const double p = sigma * sample_normal(rng);
            out[i] = {quantize(q, half_width, step), quantize(p, half_width, step)};
        }
    });
    return out;
}

std::vector<PulseFrame> channel_and_detect(const std::vector<std::pair<double, double>>& symbols,
                                           const ProtocolParams& params, std::uint64_t seed,
                                           const SiftFractions& fractions) {
    if (symbols.empty()) throw std::domain_error("channel_and_detect: empty symbol list");
    params.validate();
    fractions.validate();

    const double gain = std::sqrt(params.eta * params.t);
    const double sig_noise_sd =
        std::sqrt(1.0 + params.v_el + params.eta * params.t * params.xi);
    const double shot_noise_sd = std::sqrt(1.0 + params.v_el);

    const std::uint64_t n = symbols.size();
    std::vector<PulseFrame> frames(n);
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(0, chunks, [&](std::uint64_t c) {
        Xoshiro256 rng(derive_seed(seed ^ 0x5c5c5c5c5c5c5c5cULL, c));
        const std::uint64_t lo = c * kChunk;
        const std::uint64_t hi = std::min(n, lo + kChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            PulseFrame& f = frames[i];
            f.index = i;
            const bool shot = rng.uniform() < fractions.shot_noise;
            f.phi_choice = rng.coin() ? Quadrature::p : Quadrature::q;
            const double z = sample_normal(rng);
            if (shot) {
                f.alice_q = 0.0;
                f.alice_p = 0.0;
                f.role = Role::shot_noise;
                f.bob_value = shot_noise_sd * z;
            } else {
                f.alice_q = symbols[i].first;
                f.alice_p = symbols[i].second;
                f.role = Role::key;  // refined by sift_and_partition
                const double x_phi = (f.phi_choice == Quadrature::q) ? f.alice_q : f.alice_p;
                f.bob_value = gain * x_phi + sig_noise_sd * z;
            }
        }
    });
    return frames;
}

SiftedData sift_and_partition(std::vector<PulseFrame>& frames, const SiftFractions& fractions,
                              std::uint64_t seed) {
    fractions.validate();
    SiftedData out;
    out.total_frames = frames.size();
    Xoshiro256 rng(derive_seed(seed ^ 0x3a3a3a3a3a3a3a3aULL, 0));
    for (PulseFrame& f : frames) {
        if (f.role == Role::shot_noise) {
            out.shot_values.push_back(f.bob_value);
            continue;
        }
        const double x = (f.phi_choice == Quadrature::q) ? f.alice_q : f.alice_p;
        if (rng.uniform() < fractions.param_est) {
            f.role = Role::param_est;
            out.pe_x.push_back(x);
            out.pe_y.push_back(f.bob_value);
        } else {
            f.role = Role::key;
            out.key_x.push_back(x);
            out.key_y.push_back(f.bob_value);
        }
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'C', 'V', 'Q', 'K', 'D', 'F', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
T get(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void write_frames(std::ostream& out, const std::vector<PulseFrame>& frames) {
    out.write(kMagic, 8);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, 0);
    for (const PulseFrame& f : frames) {
        put<std::uint64_t>(out, f.index);
        put<double>(out, f.alice_q);
        put<double>(out, f.alice_p);
        put<std::uint8_t>(out, static_cast<std::uint8_t>(f.phi_choice));
        put<double>(out, f.bob_value);
        put<std::uint8_t>(out, static_cast<std::uint8_t>(f.role));
    }
    if (!out) throw std::runtime_error("write_frames: stream failure");
}

std::vector<PulseFrame> read_frames(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) throw parse_error("read_frames: bad magic");
    if (get<std::uint32_t>(in) != kVersion) throw parse_error("read_frames: unsupported version");
    get<std::uint32_t>(in);
    std::vector<PulseFrame> frames;
    for (;;) {
        PulseFrame f;
        f.index = get<std::uint64_t>(in);
        if (!in) break;
        f.alice_q = get<double>(in);
        f.alice_p = get<double>(in);
        f.phi_choice = static_cast<Quadrature>(get<std::uint8_t>(in));
        f.bob_value = get<double>(in);
        f.role = static_cast<Role>(get<std::uint8_t>(in));
        if (!in) throw parse_error("read_frames: truncated record");
        frames.push_back(f);
    }
    return frames;
}

void write_frames_file(const std::string& path, const std::vector<PulseFrame>& frames) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_frames_file: cannot open " + path);
    write_frames(out, frames);
}

std::vector<PulseFrame> read_frames_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_frames_file: cannot open " + path);
    return read_frames(in);
}

}  // namespace cvqkd
