#include "mta/vqls.hpp"

#include "mta/errors.hpp"
#include "mta/linalg.hpp"
#include "mta/rng.hpp"
#include "mta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace mta::vqls {

namespace {

constexpr char kPauliChars[] = {'I', 'X', 'Y', 'Z'};

std::size_t qubit_count_for(const std::string& ops) { return ops.size(); }

// Action of one Pauli string on basis state |j>: P|j> = phase * |flip(j)>.
// ops[c] acts on qubit n-1-c.
struct SparseAction {
    std::size_t flip_mask = 0;
    // phase(j) computed on the fly; Z and Y contribute sign/i factors.
};

Complex pauli_phase(const std::string& ops, std::size_t j) {
    const std::size_t n = ops.size();
    Complex phase(1.0, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t q = n - 1 - c;
        const bool bit = (j >> q) & 1;
        switch (ops[c]) {
            case 'I':
            case 'X': break;
            case 'Y': phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0); break;
            case 'Z':
                if (bit) phase = -phase;
                break;
            default: throw InvalidInputError("pauli string: unknown operator character");
        }
    }
    return phase;
}

std::size_t pauli_flip_mask(const std::string& ops) {
    const std::size_t n = ops.size();
    std::size_t mask = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (ops[c] == 'X' || ops[c] == 'Y') mask |= std::size_t{1} << (n - 1 - c);
    }
    return mask;
}

std::string code_to_ops(std::size_t code, std::size_t n) {
    std::string ops(n, 'I');
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t q = n - 1 - c;
        ops[c] = kPauliChars[(code >> (2 * q)) & 3];
    }
    return ops;
}

std::size_t exact_log2(std::size_t x, const char* what) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < x) ++n;
    if ((std::size_t{1} << n) != x) throw InvalidInputError(std::string(what) + ": dimension must be a power of two");
    return n;
}

} // namespace

ComplexMatrix pauli_matrix(const std::string& ops) {
    const std::size_t n = qubit_count_for(ops);
    const std::size_t L = std::size_t{1} << n;
    const std::size_t mask = pauli_flip_mask(ops);
    ComplexMatrix p(L, L);
    for (std::size_t j = 0; j < L; ++j) p(j ^ mask, j) = pauli_phase(ops, j);
    return p;
}

double pauli_expectation(const std::string& ops, const CVector& psi) {
    const std::size_t n = qubit_count_for(ops);
    if (psi.size() != (std::size_t{1} << n))
        throw InvalidInputError("pauli_expectation: state dimension mismatch");
    const std::size_t mask = pauli_flip_mask(ops);
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < psi.size(); ++j)
        acc += std::conj(psi[j ^ mask]) * pauli_phase(ops, j) * psi[j];
    return acc.real();
}

PauliDecomposition pauli_decompose(const ComplexMatrix& m) {
    if (!m.square()) throw InvalidInputError("pauli_decompose: matrix must be square");
    const std::size_t L = m.rows();
    const std::size_t n = exact_log2(L, "pauli_decompose");

    PauliDecomposition out;
    out.n_qubits = n;
    const double imag_tol = 1e-9 * std::max(1.0, m.max_abs());
    const std::size_t n_codes = std::size_t{1} << (2 * n);
    for (std::size_t code = 0; code < n_codes; ++code) {
        const std::string ops = code_to_ops(code, n);
        const std::size_t mask = pauli_flip_mask(ops);
        // Tr(P m) = sum_j phase(j) * m(j, j^mask)  [P column j hits row j^mask].
        Complex tr(0.0, 0.0);
        for (std::size_t j = 0; j < L; ++j) tr += pauli_phase(ops, j) * m(j, j ^ mask);
        const Complex c = tr / static_cast<double>(L);
        if (std::abs(c.imag()) > imag_tol)
            throw InvalidInputError("pauli_decompose: matrix is not Hermitian");
        if (std::abs(c.real()) >= 1e-12) out.terms.push_back({ops, c.real()});
    }
    return out;
}

ComplexMatrix reconstruct(const PauliDecomposition& decomposition) {
    const std::size_t L = std::size_t{1} << decomposition.n_qubits;
    ComplexMatrix m(L, L);
    for (const auto& term : decomposition.terms) {
        const std::size_t mask = pauli_flip_mask(term.ops);
        for (std::size_t j = 0; j < L; ++j)
            m(j ^ mask, j) += term.coeff * pauli_phase(term.ops, j);
    }
    return m;
}

ComplexMatrix random_pauli_matrix(std::size_t n_qubits, std::size_t n_terms,
                                  std::uint64_t seed) {
    const std::size_t n_codes = std::size_t{1} << (2 * n_qubits);
    if (n_terms < 1 || n_terms > n_codes)
        throw InvalidInputError("random_pauli_matrix: term count out of range");
    std::mt19937_64 eng = make_engine(seed);
    std::vector<std::size_t> codes(n_codes);
    std::iota(codes.begin(), codes.end(), 0);
    std::shuffle(codes.begin(), codes.end(), eng);

    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const std::size_t L = std::size_t{1} << n_qubits;
    ComplexMatrix m(L, L);
    for (std::size_t t = 0; t < n_terms; ++t) {
        const std::string ops = code_to_ops(codes[t], n_qubits);
        const double coeff = uni(eng);
        const std::size_t mask = pauli_flip_mask(ops);
        for (std::size_t j = 0; j < L; ++j)
            m(j ^ mask, j) += coeff * pauli_phase(ops, j);
    }
    return m;
}

namespace {

SigmaEstimate summarize(const std::vector<double>& samples, std::size_t excluded) {
    SigmaEstimate est;
    est.excluded = excluded;
    est.mean = stats::mean(samples);
    const double sd = stats::sample_std(samples);
    if (std::abs(est.mean) < 1e-6) {
        est.absolute_sigma = true;
        est.sigma_rel = sd;
    } else {
        est.sigma_rel = sd / std::abs(est.mean);
    }
    return est;
}

} // namespace

SigmaEstimate estimate_vqls_cost_sigma(const ComplexMatrix& m, const std::vector<double>& b,
                                       const ansatz::StateVector& psi,
                                       std::uint64_t n_shots_total, std::size_t repetitions,
                                       std::uint64_t seed) {
    if (!m.square() || m.rows() != b.size() || psi.dimension() != m.rows())
        throw InvalidInputError("estimate_vqls_cost_sigma: dimension mismatch");

    const CVector b_hat = normalized(to_complex(b));
    const ComplexMatrix mh = m.adjoint();
    const ComplexMatrix denominator_op = mh * m;
    const CVector v = mh * b_hat;
    const ComplexMatrix numerator_op = denominator_op - outer(v, v);

    const PauliDecomposition num_terms = pauli_decompose(numerator_op);
    const PauliDecomposition den_terms = pauli_decompose(denominator_op);

    const std::size_t total_terms = num_terms.terms.size() + den_terms.terms.size();
    const std::uint64_t shots_per_term =
        std::max<std::uint64_t>(1, n_shots_total / std::max<std::size_t>(total_terms, 1));

    // Exact Hadamard-test expectations, one per term.
    std::vector<double> num_expect, den_expect;
    for (const auto& t : num_terms.terms)
        num_expect.push_back(std::clamp(pauli_expectation(t.ops, psi.amplitudes), -1.0, 1.0));
    for (const auto& t : den_terms.terms)
        den_expect.push_back(std::clamp(pauli_expectation(t.ops, psi.amplitudes), -1.0, 1.0));

    std::vector<double> samples;
    samples.reserve(repetitions);
    std::size_t excluded = 0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        std::mt19937_64 eng = make_engine(seed_mix(seed, rep));
        const auto estimate_term = [&](double expectation) {
            std::binomial_distribution<std::uint64_t> binom(shots_per_term,
                                                            0.5 * (1.0 + expectation));
            const double k = static_cast<double>(binom(eng));
            return 2.0 * k / static_cast<double>(shots_per_term) - 1.0;
        };
        double num_hat = 0.0;
        for (std::size_t t = 0; t < num_terms.terms.size(); ++t)
            num_hat += num_terms.terms[t].coeff * estimate_term(num_expect[t]);
        double den_hat = 0.0;
        for (std::size_t t = 0; t < den_terms.terms.size(); ++t)
            den_hat += den_terms.terms[t].coeff * estimate_term(den_expect[t]);
        if (den_hat <= 0.0) {
            ++excluded;
            continue;
        }
        samples.push_back(num_hat / den_hat);
    }
    return summarize(samples, excluded);
}

SigmaEstimate estimate_mta_sigma(const problem::ObjectiveObservable& obs,
                                 const ansatz::StateVector& psi,
                                 const measurement::PointerConfig& cfg,
                                 std::uint64_t n_shots_total, std::size_t repetitions,
                                 std::uint64_t seed) {
    const double p0 = measurement::zero_outcome_probability(obs, psi, cfg,
                                                            measurement::Backend::spectral);
    std::vector<double> samples;
    samples.reserve(repetitions);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        samples.push_back(
            measurement::sample_zero_frequency(p0, n_shots_total, seed_mix(seed, rep)).rel_freq);
    }
    return summarize(samples, 0);
}

VarianceReport variance_comparison(std::size_t n_qubits, const std::vector<std::size_t>& counts,
                                   std::size_t matrices, std::size_t repetitions,
                                   std::uint64_t n_shots_total, std::uint64_t seed) {
    VarianceReport report;
    report.pauli_counts = counts;
    report.repetitions = repetitions;
    report.shot_budget = n_shots_total;

    std::vector<double> all_counts, all_mta;
    for (std::size_t ci = 0; ci < counts.size(); ++ci) {
        const std::size_t n_terms = counts[ci];
        std::vector<double> mta_sigmas, vqls_sigmas;
        for (std::size_t mi = 0; mi < matrices; ++mi) {
            const std::uint64_t base = (static_cast<std::uint64_t>(ci) * 1009 + mi) * 64;

            // Resample until the Pauli-string matrix is invertible with a
            // moderate condition number, so the observable is well defined.
            ComplexMatrix m;
            double kappa = 0.0;
            bool found = false;
            for (std::uint64_t attempt = 0; attempt < 200 && !found; ++attempt) {
                m = random_pauli_matrix(n_qubits, n_terms, seed_mix(seed, base + attempt));
                try {
                    kappa = linalg::condition_number(m);
                } catch (const SingularMatrixError&) {
                    continue;
                }
                found = kappa <= 100.0;
            }
            if (!found)
                throw GenerationFailureError("variance_comparison: no invertible Pauli matrix");

            std::mt19937_64 eng = make_engine(seed_mix(seed, base + 60));
            std::uniform_real_distribution<double> uni(-1.0, 1.0);
            const std::size_t L = m.rows();
            std::vector<double> b(L);
            do {
                for (auto& x : b) x = uni(eng);
            } while (norm2(to_complex(b)) < 1e-6);

            const std::size_t m_qubits = problem::required_pointer_qubits(kappa);
            const problem::ObjectiveObservable obs = problem::build_objective(m, b, m_qubits);

            // Probe state with fixed weight 1/2 on the solution eigenvector:
            // psi = (a0 + u)/sqrt(2) with u a random unit vector orthogonal
            // to a0. Pins the zero-outcome probability near 1/2 for every
            // matrix so the sweep isolates the Pauli-count dependence.
            const CVector a0 = obs.null_vector();
            CVector u(L);
            for (auto& z : u) z = Complex(uni(eng), uni(eng));
            const Complex proj = inner(a0, u);
            for (std::size_t i = 0; i < L; ++i) u[i] -= proj * a0[i];
            u = normalized(u);
            ansatz::StateVector psi;
            psi.amplitudes.resize(L);
            for (std::size_t i = 0; i < L; ++i)
                psi.amplitudes[i] = (a0[i] + u[i]) / std::numbers::sqrt2;

            const measurement::PointerConfig cfg{m_qubits};
            const SigmaEstimate mta = estimate_mta_sigma(obs, psi, cfg, n_shots_total,
                                                         repetitions, seed_mix(seed, base + 61));
            const SigmaEstimate vq = estimate_vqls_cost_sigma(m, b, psi, n_shots_total,
                                                              repetitions,
                                                              seed_mix(seed, base + 62));

            VarianceRow row;
            row.n_pauli_terms = n_terms;
            row.matrix_index = mi;
            row.sigma_rel_mta = mta.sigma_rel;
            row.sigma_rel_vqls = vq.sigma_rel;
            row.repetitions = repetitions;
            row.shot_budget = n_shots_total;
            report.rows.push_back(row);

            mta_sigmas.push_back(mta.sigma_rel);
            vqls_sigmas.push_back(vq.sigma_rel);
            all_counts.push_back(static_cast<double>(n_terms));
            all_mta.push_back(mta.sigma_rel);
        }
        report.median_sigma_mta.push_back(stats::median(mta_sigmas));
        report.median_sigma_vqls.push_back(stats::median(vqls_sigmas));
    }

    std::vector<double> count_values;
    for (std::size_t c : counts) count_values.push_back(static_cast<double>(c));
    report.spearman_vqls_medians = stats::spearman_rho(count_values, report.median_sigma_vqls);
    report.spearman_mta_medians = stats::spearman_rho(count_values, report.median_sigma_mta);
    report.spearman_mta_all = stats::spearman_rho(all_counts, all_mta);
    return report;
}

} // namespace mta::vqls
