#include "mta/measurement.hpp"

#include "mta/errors.hpp"
#include "mta/linalg.hpp"
#include "mta/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mta::measurement {

namespace {

void check_dimensions(const problem::ObjectiveObservable& obs, const ansatz::StateVector& psi) {
    if (obs.dimension() != psi.dimension())
        throw InvalidInputError("pointer distribution: observable/state dimension mismatch");
}

// Eigenbasis weights w_i = |<a_i|psi>|^2.
std::vector<double> eigenstate_weights(const problem::ObjectiveObservable& obs,
                                       const ansatz::StateVector& psi) {
    const std::size_t L = obs.dimension();
    std::vector<double> w(L);
    for (std::size_t i = 0; i < L; ++i) {
        Complex acc(0.0, 0.0);
        for (std::size_t r = 0; r < L; ++r)
            acc += std::conj(obs.spectrum.eigenvectors(r, i)) * psi.amplitudes[r];
        w[i] = std::norm(acc);
    }
    return w;
}

// Nearest pointer bin with half-way ties rounded down, wrapped modulo K.
std::size_t nearest_bin(double lambda, std::size_t K) {
    const auto j = static_cast<long long>(std::ceil(lambda * static_cast<double>(K) - 0.5));
    const auto k = static_cast<long long>(K);
    return static_cast<std::size_t>(((j % k) + k) % k);
}

// In-place radix-2 DFT with kernel e^{-2 pi i k l / K} (unnormalized).
void dft_forward(CVector& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const Complex u = a[i + j];
                const Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace

Backend backend_from_string(const std::string& name) {
    if (name == "projective") return Backend::projective;
    if (name == "spectral") return Backend::spectral;
    if (name == "circuit") return Backend::circuit;
    throw InvalidInputError("unknown backend '" + name + "'");
}

std::string to_string(Backend b) {
    switch (b) {
        case Backend::projective: return "projective";
        case Backend::spectral: return "spectral";
        case Backend::circuit: return "circuit";
    }
    return "?";
}

double phase_estimation_kernel(double delta, std::size_t K) {
    const double d = delta - std::round(delta);
    if (std::abs(d) < 1e-12) return 1.0;
    const double num = std::sin(std::numbers::pi * static_cast<double>(K) * d);
    const double den = static_cast<double>(K) * std::sin(std::numbers::pi * d);
    return (num * num) / (den * den);
}

PointerDistribution pointer_distribution_projective(const problem::ObjectiveObservable& obs,
                                                    const ansatz::StateVector& psi,
                                                    const PointerConfig& cfg) {
    check_dimensions(obs, psi);
    const std::size_t K = cfg.bins();
    const std::vector<double> w = eigenstate_weights(obs, psi);
    PointerDistribution dist;
    dist.probs.assign(K, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        dist.probs[nearest_bin(obs.spectrum.eigenvalues[i], K)] += w[i];
    return dist;
}

PointerDistribution pointer_distribution_spectral(const problem::ObjectiveObservable& obs,
                                                  const ansatz::StateVector& psi,
                                                  const PointerConfig& cfg) {
    check_dimensions(obs, psi);
    const std::size_t K = cfg.bins();
    const std::vector<double> w = eigenstate_weights(obs, psi);
    PointerDistribution dist;
    dist.probs.assign(K, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const double lam = obs.spectrum.eigenvalues[i];
        for (std::size_t l = 0; l < K; ++l) {
            dist.probs[l] +=
                w[i] * phase_estimation_kernel(lam - static_cast<double>(l) / K, K);
        }
    }
    return dist;
}

PointerDistribution pointer_distribution_circuit(const problem::ObjectiveObservable& obs,
                                                 const ansatz::StateVector& psi,
                                                 const PointerConfig& cfg) {
    check_dimensions(obs, psi);
    const std::size_t L = obs.dimension();
    std::size_t n = 0;
    while ((std::size_t{1} << n) < L) ++n;
    const std::size_t m = cfg.m_qubits;
    if (n + m > 26)
        throw ResourceLimitError("pointer_distribution_circuit: register n+m exceeds 26 qubits");
    const std::size_t K = cfg.bins();

    // Combined register, input qubits in the low n bits, output qubits above.
    CVector full(K * L, Complex(0.0, 0.0));
    std::copy(psi.amplitudes.begin(), psi.amplitudes.end(), full.begin());
    for (std::size_t j = 0; j < m; ++j) ansatz::apply_hadamard(full, n + j);

    // Controlled U^(2^j) from output qubit j; powers by repeated squaring.
    ComplexMatrix u_pow = linalg::unitary_exp(obs.a);
    CVector slice(L);
    for (std::size_t j = 0; j < m; ++j) {
        if (j > 0) u_pow = u_pow * u_pow;
        const std::size_t jbit = std::size_t{1} << j;
        for (std::size_t k = 0; k < K; ++k) {
            if (!(k & jbit)) continue;
            const std::size_t base = k * L;
            for (std::size_t r = 0; r < L; ++r) {
                Complex acc(0.0, 0.0);
                for (std::size_t c = 0; c < L; ++c) acc += u_pow(r, c) * full[base + c];
                slice[r] = acc;
            }
            std::copy(slice.begin(), slice.end(), full.begin() + static_cast<long>(base));
        }
    }

    // Inverse QFT on the output register: |k> -> sum_l e^{-2 pi i k l / K} |l> / sqrt(K).
    // Outcome l indexes the eigenvalue estimate l/K of the binary-fraction
    // readout; the per-wire bit order is absorbed into this value encoding.
    const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(K));
    CVector column(K);
    PointerDistribution dist;
    dist.probs.assign(K, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t k = 0; k < K; ++k) column[k] = full[k * L + i];
        dft_forward(column);
        for (std::size_t l = 0; l < K; ++l) dist.probs[l] += std::norm(column[l] * inv_sqrt_k);
    }
    return dist;
}

PointerDistribution pointer_distribution(const problem::ObjectiveObservable& obs,
                                         const ansatz::StateVector& psi, const PointerConfig& cfg,
                                         Backend backend) {
    switch (backend) {
        case Backend::projective: return pointer_distribution_projective(obs, psi, cfg);
        case Backend::spectral: return pointer_distribution_spectral(obs, psi, cfg);
        case Backend::circuit: return pointer_distribution_circuit(obs, psi, cfg);
    }
    throw InvalidInputError("pointer_distribution: unknown backend");
}

double zero_outcome_probability(const problem::ObjectiveObservable& obs,
                                const ansatz::StateVector& psi, const PointerConfig& cfg,
                                Backend backend) {
    if (backend == Backend::circuit) return pointer_distribution_circuit(obs, psi, cfg).zero();
    check_dimensions(obs, psi);
    const std::size_t K = cfg.bins();
    const std::vector<double> w = eigenstate_weights(obs, psi);
    double p0 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double lam = obs.spectrum.eigenvalues[i];
        if (backend == Backend::projective) {
            if (nearest_bin(lam, K) == 0) p0 += w[i];
        } else {
            p0 += w[i] * phase_estimation_kernel(lam, K);
        }
    }
    return p0;
}

ShotRecord sample_zero_frequency(double p_zero, std::uint64_t n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw InvalidInputError("sample_zero_frequency: n_shots must be >= 1");
    const double p = std::clamp(p_zero, 0.0, 1.0);
    std::mt19937_64 eng = make_engine(seed);
    std::binomial_distribution<std::uint64_t> binom(n_shots, p);
    ShotRecord rec;
    rec.n_shots = n_shots;
    rec.n_zero = binom(eng);
    rec.rel_freq = static_cast<double>(rec.n_zero) / static_cast<double>(n_shots);
    rec.rng_seed = seed;
    return rec;
}

ShotRecord sample_zero_frequency(const PointerDistribution& dist, std::uint64_t n_shots,
                                 std::uint64_t seed) {
    return sample_zero_frequency(dist.zero(), n_shots, seed);
}

std::vector<std::uint64_t> sample_pointer_counts(const PointerDistribution& dist,
                                                 std::uint64_t n_shots, std::uint64_t seed) {
    std::mt19937_64 eng = make_engine(seed);
    std::vector<std::uint64_t> counts(dist.probs.size(), 0);
    std::uint64_t remaining = n_shots;
    double mass_left = 1.0;
    for (std::size_t j = 0; j + 1 < dist.probs.size() && remaining > 0; ++j) {
        const double p = std::clamp(mass_left > 0.0 ? dist.probs[j] / mass_left : 1.0, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> binom(remaining, p);
        counts[j] = binom(eng);
        remaining -= counts[j];
        mass_left -= dist.probs[j];
    }
    if (!counts.empty()) counts.back() += remaining;
    return counts;
}

double exact_target_fidelity(const problem::ObjectiveObservable& obs,
                             const ansatz::StateVector& psi) {
    check_dimensions(obs, psi);
    const auto& lam = obs.spectrum.eigenvalues;
    if (lam.size() > 1 && lam[1] <= 1e-10 * std::max(lam.back(), 0.0))
        throw AmbiguityError("exact_target_fidelity: null space of the observable is degenerate");
    const std::size_t L = obs.dimension();
    Complex acc(0.0, 0.0);
    for (std::size_t r = 0; r < L; ++r)
        acc += std::conj(obs.spectrum.eigenvectors(r, 0)) * psi.amplitudes[r];
    return std::norm(acc);
}

} // namespace mta::measurement
