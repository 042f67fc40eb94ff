#include "mta/problem.hpp"

#include "mta/errors.hpp"
#include "mta/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mta::problem {

namespace {

bool is_power_of_two(std::size_t x) { return x > 0 && (x & (x - 1)) == 0; }

std::size_t log2_exact(std::size_t x) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < x) ++n;
    return n;
}

} // namespace

LinearSystem make_system(const ComplexMatrix& m, const std::vector<double>& b) {
    if (!m.square() || m.rows() != b.size())
        throw InvalidInputError("make_system: matrix and right-hand side shapes disagree");
    if (!is_power_of_two(b.size()))
        throw InvalidInputError("make_system: dimension must be a power of two");
    LinearSystem sys;
    sys.m = m;
    sys.b = b;
    sys.b_norm = norm2(to_complex(b));
    if (sys.b_norm <= 0.0) throw InvalidInputError("make_system: right-hand side must be nonzero");
    sys.kappa = linalg::condition_number(m); // throws if singular
    sys.n_qubits = log2_exact(b.size());
    return sys;
}

ObjectiveObservable build_objective(const LinearSystem& system, std::size_t m_qubits) {
    return build_objective(system.m, system.b, m_qubits);
}

ObjectiveObservable build_objective(const ComplexMatrix& m, const std::vector<double>& b,
                                    std::size_t m_qubits) {
    if (m_qubits < 1) throw InvalidInputError("build_objective: m_qubits must be >= 1");
    if (!m.square() || m.rows() != b.size())
        throw InvalidInputError("build_objective: matrix and right-hand side shapes disagree");
    const std::size_t L = b.size();
    const CVector b_hat = normalized(to_complex(b));

    // A_raw = M^H (I - |b><b|) M = M^H M - v v^H with v = M^H b_hat.
    const ComplexMatrix mh = m.adjoint();
    const CVector v = mh * b_hat;
    ComplexMatrix a_raw = mh * m - outer(v, v);
    // Symmetrize away rounding noise so downstream Hermiticity checks hold.
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j) {
            const Complex avg = 0.5 * (a_raw(i, j) + std::conj(a_raw(j, i)));
            a_raw(i, j) = avg;
            a_raw(j, i) = std::conj(avg);
        }

    linalg::SpectralDecomposition eig = linalg::hermitian_eig(a_raw);
    const double lam_max_raw = eig.eigenvalues.back();
    if (lam_max_raw <= 0.0)
        throw SingularMatrixError("build_objective: observable has no positive spectrum");

    const double lam_target = 1.0 - std::ldexp(1.0, -static_cast<int>(m_qubits));
    const double scale = std::sqrt(lam_max_raw / lam_target); // M -> M/scale

    ObjectiveObservable obs;
    obs.scale_factor = scale;
    obs.a = (lam_target / lam_max_raw) * a_raw;
    obs.spectrum = std::move(eig);
    for (double& lam : obs.spectrum.eigenvalues) lam *= lam_target / lam_max_raw;
    obs.lambda1 = obs.spectrum.eigenvalues.size() > 1 ? obs.spectrum.eigenvalues[1] : 0.0;
    return obs;
}

ObjectiveObservable observable_from_hermitian(const ComplexMatrix& a) {
    ObjectiveObservable obs;
    obs.a = a;
    obs.spectrum = linalg::hermitian_eig(a);
    obs.scale_factor = 1.0;
    obs.lambda1 = obs.spectrum.eigenvalues.size() > 1 ? obs.spectrum.eigenvalues[1] : 0.0;
    return obs;
}

std::size_t required_pointer_qubits(double kappa, std::size_t guard) {
    if (kappa < 1.0) throw InvalidInputError("required_pointer_qubits: kappa must be >= 1");
    const double raw = 2.0 * std::log2(kappa);
    const auto base = static_cast<long>(std::ceil(raw - 1e-12));
    const long m = std::max<long>(base, 0) + static_cast<long>(guard);
    return static_cast<std::size_t>(std::max<long>(m, 1));
}

SolutionRecord reconstruct_solution(const CVector& y, const LinearSystem& system) {
    if (y.size() != system.dimension())
        throw InvalidInputError("reconstruct_solution: state dimension mismatch");
    const CVector b_hat = normalized(to_complex(system.b));
    const CVector my = system.m * y;
    const Complex overlap = inner(b_hat, my); // <b_hat| M |y>
    if (std::abs(overlap) <= 1e-12)
        throw NonConvergenceError(
            "reconstruct_solution: vanishing <b|M|y>, state is not near the solution ray");

    SolutionRecord rec;
    rec.y = y;
    rec.z = system.b_norm / overlap;

    CVector x_complex(y.size());
    double imag_sq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        x_complex[i] = rec.z * y[i];
        imag_sq += x_complex[i].imag() * x_complex[i].imag();
    }
    rec.x = real_parts(x_complex);
    rec.dropped_imag_norm = std::sqrt(imag_sq);

    const CVector mx = system.m * to_complex(rec.x);
    double resid_sq = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) resid_sq += std::norm(mx[i] - system.b[i]);
    rec.relative_residual = std::sqrt(resid_sq) / system.b_norm;
    return rec;
}

namespace {

constexpr int kMaxAttempts = 1000;

std::vector<double> draw_rhs(std::mt19937_64& eng, std::size_t L) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<double> b(L);
        double nsq = 0.0;
        for (auto& x : b) {
            x = uni(eng);
            nsq += x * x;
        }
        if (std::sqrt(nsq) >= 1e-6) return b;
    }
    throw GenerationFailureError("random_instance: could not draw a nonzero right-hand side");
}

ComplexMatrix draw_symmetric(std::mt19937_64& eng, std::size_t L) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ComplexMatrix m(L, L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) m(i, j) = uni(eng);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j) {
            const double avg = 0.5 * (m(i, j).real() + m(j, i).real());
            m(i, j) = avg;
            m(j, i) = avg;
        }
    return m;
}

} // namespace

LinearSystem random_instance(std::size_t n_qubits, std::uint64_t seed, double kappa_max) {
    if (n_qubits < 1) throw InvalidInputError("random_instance: n_qubits must be >= 1");
    const std::size_t L = std::size_t{1} << n_qubits;
    std::mt19937_64 eng = make_engine(seed);

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const ComplexMatrix m = draw_symmetric(eng, L);
        double kappa;
        try {
            kappa = linalg::condition_number(m);
        } catch (const SingularMatrixError&) {
            continue;
        }
        if (kappa > kappa_max) continue;
        LinearSystem sys;
        sys.m = m;
        sys.b = draw_rhs(eng, L);
        sys.b_norm = norm2(to_complex(sys.b));
        sys.kappa = kappa;
        sys.n_qubits = n_qubits;
        sys.seed = seed;
        return sys;
    }
    throw GenerationFailureError("random_instance: resampling cap exceeded");
}

LinearSystem random_instance_with_kappa(std::size_t n_qubits, std::uint64_t seed, double kappa) {
    if (kappa < 1.0) throw InvalidInputError("random_instance_with_kappa: kappa must be >= 1");
    LinearSystem base = random_instance(n_qubits, seed, 1e6);
    const linalg::SpectralDecomposition eig = linalg::hermitian_eig(base.m);

    // Remap |eigenvalue| onto [1, kappa] keeping signs; the result is
    // symmetric with condition number exactly kappa.
    const std::size_t L = base.dimension();
    std::vector<double> mags(L);
    for (std::size_t i = 0; i < L; ++i) mags[i] = std::abs(eig.eigenvalues[i]);
    const double lo = *std::min_element(mags.begin(), mags.end());
    const double hi = *std::max_element(mags.begin(), mags.end());
    ComplexMatrix m(L, L);
    for (std::size_t k = 0; k < L; ++k) {
        const double t = hi > lo ? (mags[k] - lo) / (hi - lo) : 0.0;
        const double lam = (1.0 + t * (kappa - 1.0)) * (eig.eigenvalues[k] < 0.0 ? -1.0 : 1.0);
        const CVector vk = eig.eigenvector(k);
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < L; ++j) m(i, j) += lam * vk[i] * std::conj(vk[j]);
    }
    for (auto& z : m.data()) z = Complex(z.real(), 0.0);

    LinearSystem sys;
    sys.m = m;
    sys.b = base.b;
    sys.b_norm = base.b_norm;
    sys.kappa = linalg::condition_number(m);
    sys.n_qubits = n_qubits;
    sys.seed = seed;
    return sys;
}

} // namespace mta::problem
