#pragma once

#include "mta/ansatz.hpp"
#include "mta/complex_matrix.hpp"
#include "mta/measurement.hpp"
#include "mta/optimizer.hpp"
#include "mta/problem.hpp"

#include <string>
#include <vector>

namespace mta::io {

// Plain-text CSV of real numbers, one matrix row per line. Complex entries
// are not supported and any unparseable field raises IoError.
ComplexMatrix load_matrix_csv(const std::string& path);
std::vector<double> load_vector_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const ComplexMatrix& m);
void write_vector_csv(const std::string& path, const std::vector<double>& v);

// System document: {"n": ..., "seed": ... (optional), "matrix": [[...]],
// "b": [...], "kappa": ...}.
std::string system_to_json(const problem::LinearSystem& system);
problem::LinearSystem system_from_json(const std::string& text);
void save_system(const std::string& path, const problem::LinearSystem& system);
problem::LinearSystem load_system(const std::string& path);

// Parameters document: {"n": ..., "k": ..., "angles": [...]} (radians).
std::string parameters_to_json(const ansatz::AnsatzParameters& params);
ansatz::AnsatzParameters parameters_from_json(const std::string& text);

// Trace CSV: header then one row (iter, param_index, r, F_T, N) per line.
void write_trace_csv(const std::string& path, const optimizer::OptimizerTrace& trace);

// Pointer distribution CSV: (outcome index, probability).
void write_pointer_csv(const std::string& path, const measurement::PointerDistribution& dist);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Shortest round-trip decimal form, used by every CSV writer so outputs are
// byte-identical for identical inputs.
std::string format_double(double v);

} // namespace mta::io
