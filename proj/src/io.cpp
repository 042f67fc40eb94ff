#include "mta/io.hpp"

#include "mta/errors.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mta::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

namespace {

double parse_field(const std::string& field, const std::string& path) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    // Trailing garbage (including complex suffixes like "1+2j") is rejected.
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0'))
        throw IoError("unparseable numeric field '" + field + "' in " + path);
    return v;
}

std::vector<std::vector<double>> load_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(parse_field(field, path));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ComplexMatrix load_matrix_csv(const std::string& path) {
    const auto rows = load_rows(path);
    if (rows.empty()) throw IoError("empty matrix file: " + path);
    const std::size_t cols = rows.front().size();
    ComplexMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw IoError("ragged matrix rows in " + path);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<double> load_vector_csv(const std::string& path) {
    const auto rows = load_rows(path);
    std::vector<double> v;
    for (const auto& row : rows) v.insert(v.end(), row.begin(), row.end());
    if (v.empty()) throw IoError("empty vector file: " + path);
    return v;
}

void write_matrix_csv(const std::string& path, const ComplexMatrix& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j).real());
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_vector_csv(const std::string& path, const std::vector<double>& v) {
    std::ostringstream out;
    for (double x : v) out << format_double(x) << '\n';
    write_text_file(path, out.str());
}

std::string system_to_json(const problem::LinearSystem& system) {
    json doc;
    doc["n"] = system.n_qubits;
    if (system.seed) doc["seed"] = *system.seed;
    doc["kappa"] = system.kappa;
    json matrix = json::array();
    for (std::size_t i = 0; i < system.m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < system.m.cols(); ++j) row.push_back(system.m(i, j).real());
        matrix.push_back(std::move(row));
    }
    doc["matrix"] = std::move(matrix);
    doc["b"] = system.b;
    return doc.dump(2);
}

problem::LinearSystem system_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid system JSON: ") + e.what());
    }
    const auto& matrix = doc.at("matrix");
    const std::size_t rows = matrix.size();
    if (rows == 0) throw IoError("system JSON has an empty matrix");
    ComplexMatrix m(rows, matrix.front().size());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = matrix.at(i).at(j).get<double>();
    const std::vector<double> b = doc.at("b").get<std::vector<double>>();
    problem::LinearSystem sys = problem::make_system(m, b);
    if (doc.contains("seed")) sys.seed = doc["seed"].get<std::uint64_t>();
    return sys;
}

void save_system(const std::string& path, const problem::LinearSystem& system) {
    write_text_file(path, system_to_json(system) + "\n");
}

problem::LinearSystem load_system(const std::string& path) {
    return system_from_json(read_text_file(path));
}

std::string parameters_to_json(const ansatz::AnsatzParameters& params) {
    json doc;
    doc["n"] = params.n_qubits;
    doc["k"] = params.k_modules;
    json angles = json::array();
    for (double a : params.angles) angles.push_back(ansatz::reduce_angle(a));
    doc["angles"] = std::move(angles);
    return doc.dump(2);
}

ansatz::AnsatzParameters parameters_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid parameters JSON: ") + e.what());
    }
    ansatz::AnsatzParameters p;
    p.n_qubits = doc.at("n").get<std::size_t>();
    p.k_modules = doc.at("k").get<std::size_t>();
    p.angles = doc.at("angles").get<std::vector<double>>();
    if (p.angles.size() != ansatz::total_angle_count(p.n_qubits, p.k_modules))
        throw IoError("parameters JSON: angle count does not match (n, k)");
    return p;
}

void write_trace_csv(const std::string& path, const optimizer::OptimizerTrace& trace) {
    std::ostringstream out;
    out << "iter,param_index,r,F_T,N\n";
    for (const auto& rec : trace.iterations) {
        out << rec.iter << ',' << rec.param_index << ',' << format_double(rec.rel_freq) << ','
            << format_double(rec.exact_fidelity) << ',' << rec.n_shots << '\n';
    }
    write_text_file(path, out.str());
}

void write_pointer_csv(const std::string& path, const measurement::PointerDistribution& dist) {
    std::ostringstream out;
    out << "outcome,probability\n";
    for (std::size_t j = 0; j < dist.probs.size(); ++j)
        out << j << ',' << format_double(dist.probs[j]) << '\n';
    write_text_file(path, out.str());
}

} // namespace mta::io
