#include "regkit/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regkit/errors.hpp"
#include "regkit/kernels.hpp"

namespace regkit {

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, 0.0) {
    if (rows <= 0 || cols <= 0) throw DimensionError("matrix dimensions must be positive");
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows <= 0 || cols <= 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(rows) * cols)
        throw DimensionError("entry count does not match rows*cols");
    for (double v : data_)
        if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
}

void Matrix::add_scaled(const Matrix& other, double alpha) {
    if (!same_shape(other)) throw DimensionError("shape mismatch in add_scaled");
    kernels::axpy(alpha, other.data(), data(), size());
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

double frobenius_norm(const Matrix& a) {
    return std::sqrt(kernels::sum_squares(a.data(), a.size()));
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw DimensionError("shape mismatch in frobenius_inner");
    return kernels::dot(a.data(), b.data(), a.size());
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    out.add_scaled(b, 1.0);
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    out.add_scaled(b, -1.0);
    return out;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.cols()) throw DimensionError("matvec size mismatch");
    std::vector<double> y(a.rows());
    for (int i = 0; i < a.rows(); ++i) y[i] = kernels::dot(a.row(i), x.data(), x.size());
    return y;
}

std::vector<double> matvec_transpose(const Matrix& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.rows()) throw DimensionError("matvec_transpose size mismatch");
    std::vector<double> y(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) kernels::axpy(x[i], a.row(i), y.data(), y.size());
    return y;
}

Rank1Projection project_onto_rank1(const Matrix& r, std::span<const double> u,
                                   std::span<const double> v) {
    if (static_cast<int>(u.size()) != r.rows() || static_cast<int>(v.size()) != r.cols())
        throw DimensionError("direction lengths must match matrix shape");
    const double unorm2 = kernels::sum_squares(u.data(), u.size());
    const double vnorm2 = kernels::sum_squares(v.data(), v.size());
    if (unorm2 == 0.0 || vnorm2 == 0.0)
        throw DegenerateDirectionError("projection direction is zero");

    // <r, uv^T> = u^T r v
    const std::vector<double> rv = matvec(r, v);
    const double inner = kernels::dot(u.data(), rv.data(), rv.size());
    const double coeff = inner / (unorm2 * vnorm2);

    Rank1Projection out;
    out.q = Matrix(r.rows(), r.cols());
    for (int i = 0; i < r.rows(); ++i) kernels::axpy(coeff * u[i], v.data(), out.q.row(i), v.size());
    out.magnitude = std::abs(inner) / std::sqrt(unorm2 * vnorm2);
    return out;
}

Matrix read_matrix(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    std::istringstream header(line);
    long long rows = 0, cols = 0;
    if (!(header >> rows >> cols)) throw ParseError("expected header \"rows cols\"", lineno);
    std::string trailing;
    if (header >> trailing) throw ParseError("unexpected tokens after header", lineno);
    if (rows <= 0 || cols <= 0 || rows > 100000 || cols > 100000)
        throw ParseError("invalid matrix dimensions", lineno);

    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(rows) * cols);
    for (long long i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw ParseError("missing matrix row", lineno + 1);
        ++lineno;
        std::istringstream row(line);
        for (long long j = 0; j < cols; ++j) {
            double v = 0.0;
            if (!(row >> v)) throw ParseError("expected " + std::to_string(cols) + " entries", lineno);
            if (!std::isfinite(v)) throw ParseError("non-finite entry", lineno);
            entries.push_back(v);
        }
        if (row >> trailing) throw ParseError("too many entries on row", lineno);
    }
    return Matrix(static_cast<int>(rows), static_cast<int>(cols), std::move(entries));
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    char buf[40];
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return read_matrix(in);
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing", 0);
    write_matrix(out, m);
}

} // namespace regkit
