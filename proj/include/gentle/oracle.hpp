#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "gentle/moves.hpp"

namespace gentle {

using Rational = mpq_class;

// Dense matrix over the rationals.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    [[nodiscard]] bool is_zero() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

[[nodiscard]] std::size_t rank(Matrix m);
// Basis of {v : m v = 0}.
[[nodiscard]] std::vector<std::vector<Rational>> nullspace(Matrix m);
// Throws std::domain_error for singular input.
[[nodiscard]] Matrix inverse(const Matrix& m);
[[nodiscard]] Matrix jordan_block(int size, const Rational& eigenvalue);

// Representation with one matrix per arrow: rows = dim(target), cols = dim(source).
struct MatrixModule {
    DimVector dims;
    std::vector<Matrix> maps;

    // Throws std::invalid_argument on shape mismatch or a non-zero relation product.
    void validate(const Quiver& q) const;
    [[nodiscard]] int total_dimension() const;
};

[[nodiscard]] nlohmann::ordered_json to_json(const Quiver& q, const MatrixModule& m);
[[nodiscard]] MatrixModule matrix_module_from_json(const Quiver& q, const nlohmann::json& j);

[[nodiscard]] MatrixModule realize_string(const Quiver& q, const Walk& c);
// Identity blocks with J(quasi_length, lambda) on the closing letter; minimality not required.
// Throws std::invalid_argument for lambda = 0 or quasi_length < 1.
[[nodiscard]] MatrixModule realize_band(const Quiver& q, const Word& band, const Rational& lambda,
                                        int quasi_length = 1);
[[nodiscard]] MatrixModule realize_item(const Quiver& q, const Item& item, const Rational& lambda = 1,
                                        int quasi_length = 1);
[[nodiscard]] MatrixModule direct_sum(const Quiver& q, const std::vector<MatrixModule>& parts);
// Copies of one band get distinct parameters 1, 2, 3, ...
[[nodiscard]] MatrixModule realize_diagramme(const Quiver& q, const Diagramme& d);

[[nodiscard]] long hom_nullity(const Quiver& q, const MatrixModule& from, const MatrixModule& to);
[[nodiscard]] std::size_t arrow_rank(const MatrixModule& m, ArrowId a);

// Explicit basis of Hom(M(x, lambda_x, qx), M(y, lambda_y, qy)) from pairs of top and bottom
// substrings of the unraveled words, plus the fibrewise maps commuting with the Jordan blocks
// when x = y and the parameters agree.
struct HomBasisCheck {
    long constructed = 0;
    long nullity = 0;
    bool intertwiners = true;
    bool independent = true;
    [[nodiscard]] bool ok() const { return intertwiners && independent && constructed == nullity; }
};
[[nodiscard]] HomBasisCheck check_hom_basis_formulas(const Quiver& q, const Item& x, const Rational& lambda_x,
                                                     int qx, const Item& y, const Rational& lambda_y, int qy);

// Unique diagramme of dim(m) whose h' agrees with the module's on the union of the
// candidates' supports. Throws std::runtime_error when no or several candidates match.
struct Identification {
    Diagramme diagramme;
    int l_max = 0;
};
[[nodiscard]] Identification identify_diagramme(const Quiver& q, const MatrixModule& m,
                                                std::optional<int> l_max = std::nullopt);

// Polynomials in t with rational coefficients.
class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(const Rational& constant);  // NOLINT: implicit by design
    static Polynomial t();

    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] Rational operator()(const Rational& t) const;
    [[nodiscard]] std::string to_string() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void trim();
    std::vector<Rational> coeffs_;  // lowest degree first
};

struct PolyMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Polynomial> entries;

    Polynomial& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    [[nodiscard]] const Polynomial& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

struct WitnessFamily {
    DimVector dims;
    std::vector<PolyMatrix> maps;

    [[nodiscard]] MatrixModule at(const Rational& t) const;
    [[nodiscard]] bool relations_hold_identically(const Quiver& q) const;
};

[[nodiscard]] nlohmann::ordered_json to_json(const Quiver& q, const WitnessFamily& w);
[[nodiscard]] WitnessFamily constant_family(const MatrixModule& m);

// The realization of d (bands with parameter 1) with the k-th letter of one copy of `item`
// scaled by t.
[[nodiscard]] WitnessFamily deletion_witness(const Quiver& q, const Diagramme& d, const Item& item, int k);

struct WitnessResult {
    std::optional<WitnessFamily> family;
    std::string unsupported;  // reason when no family is built
};
// String-string pair reachings only; other reachings return an unsupported result.
[[nodiscard]] WitnessResult resolution_witness(const Quiver& q, const Diagramme& d, const Reaching& r);

// Distinct non-zero rationals with numerators and denominators at most 97.
[[nodiscard]] std::vector<Rational> seeded_parameters(std::uint64_t seed, int count = 3);

}  // namespace gentle
