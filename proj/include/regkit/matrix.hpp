#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace regkit {

/// Dense real rectangular matrix, row-major. The universal carrier for the
/// input A, the approximation built against it, and their residuals.
/// Entries are required to be finite; construction from data validates this.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols); // zero-filled
    Matrix(int rows, int cols, std::vector<double> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    /// this += alpha * other (shapes must match).
    void add_scaled(const Matrix& other, double alpha);

    Matrix transposed() const;

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

double frobenius_norm(const Matrix& a);
double frobenius_inner(const Matrix& a, const Matrix& b);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// y = a * x
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
/// y = a^T * x
std::vector<double> matvec_transpose(const Matrix& a, std::span<const double> x);

struct Rank1Projection {
    Matrix q;
    double magnitude = 0.0;
};

/// Frobenius projection of r onto the rank-1 matrix u v^T, together with its
/// magnitude |u^T r v| / (||u|| ||v||). u, v need not be unit but must be
/// nonzero.
Rank1Projection project_onto_rank1(const Matrix& r, std::span<const double> u,
                                   std::span<const double> v);

/// Text format: first line "rows cols", then `rows` lines of `cols`
/// space-separated decimal numbers.
Matrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

} // namespace regkit
