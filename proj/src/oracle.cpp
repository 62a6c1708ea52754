#include "gentle/oracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "gentle/poset.hpp"

namespace gentle {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shapes do not compose");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& x = a(r, k);
            if (sgn(x) == 0) continue;
            for (std::size_t c = 0; c < b.cols_; ++c)
                if (sgn(b(k, c)) != 0) out(r, c) += x * b(k, c);
        }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shapes differ");
    Matrix out = a;
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] -= b.data_[k];
    return out;
}

namespace {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;  // sorted by column

// Incremental row echelon form; pivots are normalised to 1.
class Echelon {
  public:
    bool insert(SparseRow row) {
        while (!row.empty()) {
            const auto it = pivots_.find(row.front().first);
            if (it == pivots_.end()) break;
            const Rational factor = row.front().second;
            row = axpy(row, -factor, it->second);
        }
        if (row.empty()) return false;
        const Rational lead = row.front().second;
        for (auto& [c, x] : row) x /= lead;
        const std::size_t col = row.front().first;
        pivots_.emplace(col, std::move(row));
        return true;
    }
    [[nodiscard]] std::size_t rank() const { return pivots_.size(); }

  private:
    static SparseRow axpy(const SparseRow& x, const Rational& a, const SparseRow& y) {
        SparseRow out;
        out.reserve(x.size() + y.size());
        std::size_t i = 0, j = 0;
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
                out.push_back(x[i++]);
            } else if (i == x.size() || y[j].first < x[i].first) {
                out.emplace_back(y[j].first, a * y[j].second);
                ++j;
            } else {
                Rational v = x[i].second + a * y[j].second;
                if (sgn(v) != 0) out.emplace_back(x[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return out;
    }
    std::map<std::size_t, SparseRow> pivots_;
};

SparseRow sparse_row(const Matrix& m, std::size_t r) {
    SparseRow row;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (sgn(m(r, c)) != 0) row.emplace_back(c, m(r, c));
    return row;
}

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t p = row;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(row, k));
        const Rational lead = m(row, c);
        for (std::size_t k = 0; k < m.cols(); ++k) m(row, k) /= lead;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || sgn(m(r, c)) == 0) continue;
            const Rational f = m(r, c);
            for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) -= f * m(row, k);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(Matrix m) {
    Echelon e;
    for (std::size_t r = 0; r < m.rows(); ++r) e.insert(sparse_row(m, r));
    return e.rank();
}

std::vector<std::vector<Rational>> nullspace(Matrix m) {
    const std::vector<std::size_t> pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.cols());
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

Matrix inverse(const Matrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::domain_error("inverse of a non-square matrix");
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = 1;
    }
    const auto pivots = rref(aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) throw std::domain_error("singular matrix");
    Matrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
    return out;
}

Matrix jordan_block(int size, const Rational& eigenvalue) {
    Matrix j(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) {
        j(k, k) = eigenvalue;
        if (k + 1 < size) j(k, k + 1) = 1;
    }
    return j;
}

// ---- modules ----

void MatrixModule::validate(const Quiver& q) const {
    if (dims.size() != q.vertex_count()) throw std::invalid_argument("dimension vector has wrong size");
    if (maps.size() != q.arrow_count()) throw std::invalid_argument("one matrix per arrow expected");
    for (std::size_t a = 0; a < maps.size(); ++a) {
        const Arrow& arrow = q.arrow(static_cast<ArrowId>(a));
        if (maps[a].rows() != static_cast<std::size_t>(dims[arrow.target]) ||
            maps[a].cols() != static_cast<std::size_t>(dims[arrow.source]))
            throw std::invalid_argument("matrix of " + arrow.name + " has the wrong shape");
    }
    for (const auto& [second, first] : q.relations())
        if (!(maps[second] * maps[first]).is_zero())
            throw std::invalid_argument("relation " + q.arrow(second).name + q.arrow(first).name +
                                        " is not satisfied");
}

int MatrixModule::total_dimension() const {
    int n = 0;
    for (int x : dims) n += x;
    return n;
}

nlohmann::ordered_json to_json(const Quiver& q, const MatrixModule& m) {
    nlohmann::ordered_json out;
    out["dims"] = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < q.vertex_count(); ++v) out["dims"][q.vertex_name(static_cast<VertexId>(v))] = m.dims[v];
    out["matrices"] = nlohmann::ordered_json::object();
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        auto rows = nlohmann::ordered_json::array();
        const Matrix& x = m.maps[a];
        for (std::size_t r = 0; r < x.rows(); ++r) {
            auto row = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < x.cols(); ++c) row.push_back(x(r, c).get_str());
            rows.push_back(std::move(row));
        }
        out["matrices"][q.arrow(static_cast<ArrowId>(a)).name] = std::move(rows);
    }
    return out;
}

namespace {

Rational parse_rational(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw std::invalid_argument("matrix entries must be strings \"p/q\" or integers");
    Rational x;
    if (x.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("bad rational " + j.dump());
    if (sgn(x.get_den()) == 0) throw std::invalid_argument("zero denominator in " + j.dump());
    x.canonicalize();
    return x;
}

}  // namespace

MatrixModule matrix_module_from_json(const Quiver& q, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("matrices"))
        throw std::invalid_argument("module needs \"dims\" and \"matrices\"");
    MatrixModule m;
    m.dims.assign(q.vertex_count(), 0);
    for (const auto& [name, n] : j.at("dims").items()) {
        const auto v = q.find_vertex(name);
        if (!v) throw std::invalid_argument("unknown vertex " + name);
        if (!n.is_number_integer() || n.get<int>() < 0) throw std::invalid_argument("bad dimension at " + name);
        m.dims[*v] = n.get<int>();
    }
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arrow = q.arrow(static_cast<ArrowId>(a));
        m.maps.emplace_back(m.dims[arrow.target], m.dims[arrow.source]);
    }
    for (const auto& [name, rows] : j.at("matrices").items()) {
        const auto a = q.find_arrow(name);
        if (!a) throw std::invalid_argument("unknown arrow " + name);
        Matrix& x = m.maps[*a];
        if (!rows.is_array() || rows.size() != x.rows())
            throw std::invalid_argument("matrix of " + name + " has the wrong number of rows");
        for (std::size_t r = 0; r < x.rows(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != x.cols())
                throw std::invalid_argument("matrix of " + name + " has the wrong number of columns");
            for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) = parse_rational(rows[r][c]);
        }
    }
    m.validate(q);
    return m;
}

namespace {

// Basis layout of a string or band module: position p occupies `fibre` consecutive
// indices at its vertex, in position order.
struct Layout {
    std::vector<VertexId> vertex;
    std::vector<std::size_t> offset;
    DimVector dims;
    int fibre = 1;

    [[nodiscard]] int positions() const { return static_cast<int>(vertex.size()); }
    [[nodiscard]] std::size_t index(int p, int f) const {
        return offset[static_cast<std::size_t>(p - 1)] + static_cast<std::size_t>(f);
    }
};

Layout layout_of(const Quiver& q, const Host& h, int fibre) {
    Layout l;
    l.fibre = fibre;
    l.dims.assign(q.vertex_count(), 0);
    const int count = h.is_band() ? h.length() : h.length() + 1;
    for (int p = 1; p <= count; ++p) {
        const VertexId v = host_vertex(q, h, p);
        l.vertex.push_back(v);
        l.offset.push_back(static_cast<std::size_t>(l.dims[v]));
        l.dims[v] += fibre;
    }
    return l;
}

// Position of the closing letter's far end.
int next_position(const Host& h, int k) { return h.is_band() && k == h.length() ? 1 : k + 1; }

MatrixModule empty_module(const Quiver& q, const DimVector& dims) {
    MatrixModule m;
    m.dims = dims;
    for (const Arrow& a : q.arrows()) m.maps.emplace_back(dims[a.target], dims[a.source]);
    return m;
}

MatrixModule realize_host(const Quiver& q, const Host& h, const Rational& lambda, int fibre) {
    if (h.is_band()) {
        if (sgn(lambda) == 0) throw std::invalid_argument("band parameter must be non-zero");
        if (fibre < 1) throw std::invalid_argument("quasi-length must be positive");
    } else {
        fibre = 1;
    }
    const Layout l = layout_of(q, h, fibre);
    MatrixModule m = empty_module(q, l.dims);
    const Matrix plain = Matrix::identity(static_cast<std::size_t>(fibre));
    const Matrix closing = h.is_band() ? jordan_block(fibre, lambda) : plain;
    for (int k = 1; k <= h.length(); ++k) {
        const Letter c = host_letter(h, k);
        const int near = k, far = next_position(h, k);
        const Matrix& block = h.is_band() && k == h.length() ? closing : plain;
        Matrix& x = m.maps[c.arrow];
        for (int f = 0; f < fibre; ++f)
            for (int g = 0; g < fibre; ++g) {
                if (sgn(block(f, g)) == 0) continue;
                if (c.direct) x(l.index(near, f), l.index(far, g)) = block(f, g);
                else x(l.index(far, f), l.index(near, g)) = block(f, g);
            }
    }
    return m;
}

}  // namespace

MatrixModule realize_string(const Quiver& q, const Walk& c) {
    if (!is_valid_walk(q, c)) throw std::invalid_argument("not a valid string");
    return realize_host(q, Host{ItemKind::String, c.letters, c.base}, 1, 1);
}

MatrixModule realize_band(const Quiver& q, const Word& band, const Rational& lambda, int quasi_length) {
    if (band.size() < 2 || !is_valid_cycle(q, band)) throw std::invalid_argument("not a valid band");
    return realize_host(q, Host{ItemKind::Band, band, q.target(band.front())}, lambda, quasi_length);
}

MatrixModule realize_item(const Quiver& q, const Item& item, const Rational& lambda, int quasi_length) {
    return realize_host(q, host_of(q, item), lambda, quasi_length);
}

MatrixModule direct_sum(const Quiver& q, const std::vector<MatrixModule>& parts) {
    DimVector dims(q.vertex_count(), 0);
    for (const auto& p : parts)
        for (std::size_t v = 0; v < dims.size(); ++v) dims[v] += p.dims[v];
    MatrixModule out = empty_module(q, dims);
    std::vector<std::size_t> offset(q.vertex_count(), 0);
    for (const auto& p : parts) {
        for (std::size_t a = 0; a < q.arrow_count(); ++a) {
            const Arrow& arrow = q.arrow(static_cast<ArrowId>(a));
            const Matrix& x = p.maps[a];
            for (std::size_t r = 0; r < x.rows(); ++r)
                for (std::size_t c = 0; c < x.cols(); ++c)
                    if (sgn(x(r, c)) != 0)
                        out.maps[a](offset[arrow.target] + r, offset[arrow.source] + c) = x(r, c);
        }
        for (std::size_t v = 0; v < dims.size(); ++v) offset[v] += static_cast<std::size_t>(p.dims[v]);
    }
    return out;
}

MatrixModule realize_diagramme(const Quiver& q, const Diagramme& d) {
    std::vector<MatrixModule> parts;
    for (const auto& [item, mult] : d.items())
        for (int copy = 0; copy < mult; ++copy) parts.push_back(realize_item(q, item, Rational(copy + 1)));
    if (parts.empty()) return empty_module(q, DimVector(q.vertex_count(), 0));
    return direct_sum(q, parts);
}

long hom_nullity(const Quiver& q, const MatrixModule& from, const MatrixModule& to) {
    // Unknown f_v is a dim_to(v) x dim_from(v) block.
    std::vector<std::size_t> base(q.vertex_count(), 0);
    std::size_t unknowns = 0;
    for (std::size_t v = 0; v < q.vertex_count(); ++v) {
        base[v] = unknowns;
        unknowns += static_cast<std::size_t>(to.dims[v]) * static_cast<std::size_t>(from.dims[v]);
    }
    auto var = [&](VertexId v, std::size_t r, std::size_t c) {
        return base[v] + r * static_cast<std::size_t>(from.dims[v]) + c;
    };
    Echelon e;
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arrow = q.arrow(static_cast<ArrowId>(a));
        const Matrix& in = from.maps[a];
        const Matrix& out = to.maps[a];
        // out * f_source - f_target * in = 0
        for (std::size_t r = 0; r < out.rows(); ++r)
            for (std::size_t c = 0; c < in.cols(); ++c) {
                std::map<std::size_t, Rational> row;
                for (std::size_t k = 0; k < out.cols(); ++k)
                    if (sgn(out(r, k)) != 0) row[var(arrow.source, k, c)] += out(r, k);
                for (std::size_t k = 0; k < in.rows(); ++k)
                    if (sgn(in(k, c)) != 0) row[var(arrow.target, r, k)] -= in(k, c);
                SparseRow sparse;
                for (auto& [col, x] : row)
                    if (sgn(x) != 0) sparse.emplace_back(col, x);
                if (!sparse.empty()) e.insert(std::move(sparse));
            }
    }
    return static_cast<long>(unknowns - e.rank());
}

std::size_t arrow_rank(const MatrixModule& m, ArrowId a) { return rank(m.maps.at(static_cast<std::size_t>(a))); }

// ---- explicit hom bases ----

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

Matrix power(const Matrix& m, int k) {
    Matrix out = Matrix::identity(m.rows());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

// Fibre identification of the unraveled walk with the module: position P carries T_P.
struct Covering {
    const Host* host = nullptr;
    Layout layout;
    Matrix step;      // T_{P+m} = step T_P
    Matrix step_inv;

    Covering(const Quiver& q, const Host& h, const Rational& lambda, int fibre)
        : host(&h), layout(layout_of(q, h, h.is_band() ? fibre : 1)) {
        if (h.is_band()) {
            const Matrix j = jordan_block(fibre, lambda);
            const bool direct = host_letter(h, h.length()).direct;
            step = direct ? inverse(j) : j;
            step_inv = direct ? j : inverse(j);
        }
    }

    [[nodiscard]] int position(int p) const {
        if (!host->is_band()) {
            if (p < 1 || p > layout.positions()) throw std::logic_error("covering position out of range");
            return p;
        }
        const int m = host->length();
        return ((p - 1) % m + m) % m + 1;
    }
    [[nodiscard]] Matrix transfer(int p) const {
        if (!host->is_band()) return Matrix::identity(1);
        const int k = floor_div(p - 1, host->length());
        return k >= 0 ? power(step, k) : power(step_inv, -k);
    }
    [[nodiscard]] Matrix transfer_inverse(int p) const {
        if (!host->is_band()) return Matrix::identity(1);
        const int k = floor_div(p - 1, host->length());
        return k >= 0 ? power(step_inv, k) : power(step, -k);
    }
};

using VertexMaps = std::vector<Matrix>;  // one block per vertex: dim_to x dim_from

VertexMaps zero_maps(const Layout& from, const Layout& to) {
    VertexMaps out;
    for (std::size_t v = 0; v < from.dims.size(); ++v) out.emplace_back(to.dims[v], from.dims[v]);
    return out;
}

bool intertwines(const Quiver& q, const VertexMaps& f, const MatrixModule& from, const MatrixModule& to) {
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arrow = q.arrow(static_cast<ArrowId>(a));
        if (!(f[arrow.target] * from.maps[a] == to.maps[a] * f[arrow.source])) return false;
    }
    return true;
}

int span_bound(const Item& x, const Item& y) {
    if (x.is_string() && y.is_string()) return std::min(x.length(), y.length());
    if (x.is_string()) return x.length();
    if (y.is_string()) return y.length();
    return x.length() * y.length() + x.length() + y.length();
}

}  // namespace

HomBasisCheck check_hom_basis_formulas(const Quiver& q, const Item& x, const Rational& lambda_x, int qx,
                                       const Item& y, const Rational& lambda_y, int qy) {
    if ((x.is_band() && !x.minimal()) || (y.is_band() && !y.minimal()))
        throw std::invalid_argument("bands must be minimal");
    if (x.is_string()) qx = 1;
    if (y.is_string()) qy = 1;
    const Host hx = host_of(q, x);
    const Host hy = host_of(q, y);
    const MatrixModule mx = realize_host(q, hx, lambda_x, qx);
    const MatrixModule my = realize_host(q, hy, lambda_y, qy);
    const Covering cx(q, hx, lambda_x, qx);
    const Covering cy(q, hy, lambda_y, qy);
    const int bound = span_bound(x, y);

    std::vector<VertexMaps> basis;
    // Graph maps: X positions P in the top span go to Y positions Q(P) in the bottom span.
    for (Span t : top_spans(hx, bound)) {
        const Walk e = substring(q, hx, t);
        for (bool flip : {false, true}) {
            if (flip && (y.is_lazy() || t.length() == 0)) continue;
            const Host hyf = host_of(q, y, flip);
            for (Span b : bottom_spans(hyf, bound)) {
                if (b.length() != t.length() || !(substring(q, hyf, b) == e)) continue;
                const int q0 = flip ? hy.length() + 2 - b.i : b.i;
                const int dir = flip ? -1 : 1;
                for (int g0 = 0; g0 < qy; ++g0)
                    for (int f0 = 0; f0 < qx; ++f0) {
                        Matrix unit(static_cast<std::size_t>(qy), static_cast<std::size_t>(qx));
                        unit(g0, f0) = 1;
                        VertexMaps phi = zero_maps(cx.layout, cy.layout);
                        for (int p = t.i; p <= t.j; ++p) {
                            const int qpos = q0 + dir * (p - t.i);
                            const int rx = cx.position(p), ry = cy.position(qpos);
                            const VertexId v = cx.layout.vertex[static_cast<std::size_t>(rx - 1)];
                            if (cy.layout.vertex[static_cast<std::size_t>(ry - 1)] != v)
                                throw std::logic_error("graph map joins different vertices");
                            const Matrix block = cy.transfer(qpos) * unit * cx.transfer_inverse(p);
                            for (int g = 0; g < qy; ++g)
                                for (int f = 0; f < qx; ++f)
                                    phi[v](cy.layout.index(ry, g), cx.layout.index(rx, f)) += block(g, f);
                        }
                        basis.push_back(std::move(phi));
                    }
            }
        }
    }
    // Fibrewise maps G with J_y G = G J_x.
    if (x.is_band() && x == y && lambda_x == lambda_y) {
        const Matrix jx = jordan_block(qx, lambda_x), jy = jordan_block(qy, lambda_y);
        Matrix eq(static_cast<std::size_t>(qy * qx), static_cast<std::size_t>(qy * qx));
        for (int a = 0; a < qy; ++a)
            for (int b = 0; b < qx; ++b) {
                for (int k = 0; k < qy; ++k) eq(a * qx + b, k * qx + b) += jy(a, k);
                for (int k = 0; k < qx; ++k) eq(a * qx + b, a * qx + k) -= jx(k, b);
            }
        for (const auto& g : nullspace(eq)) {
            VertexMaps phi = zero_maps(cx.layout, cy.layout);
            for (int r = 1; r <= cx.layout.positions(); ++r) {
                const VertexId v = cx.layout.vertex[static_cast<std::size_t>(r - 1)];
                for (int a = 0; a < qy; ++a)
                    for (int b = 0; b < qx; ++b)
                        phi[v](cy.layout.index(r, a), cx.layout.index(r, b)) = g[static_cast<std::size_t>(a * qx + b)];
            }
            basis.push_back(std::move(phi));
        }
    }

    HomBasisCheck out;
    out.constructed = static_cast<long>(basis.size());
    out.nullity = hom_nullity(q, mx, my);
    Echelon e;
    for (const auto& phi : basis) {
        if (!intertwines(q, phi, mx, my)) out.intertwiners = false;
        SparseRow row;
        std::size_t offset = 0;
        for (const Matrix& block : phi) {
            for (std::size_t r = 0; r < block.rows(); ++r)
                for (std::size_t c = 0; c < block.cols(); ++c)
                    if (sgn(block(r, c)) != 0) row.emplace_back(offset + r * block.cols() + c, block(r, c));
            offset += block.rows() * block.cols();
        }
        if (!e.insert(std::move(row))) out.independent = false;
    }
    return out;
}

// ---- identification ----

Identification identify_diagramme(const Quiver& q, const MatrixModule& m, std::optional<int> l_max) {
    m.validate(q);
    const std::vector<Diagramme> candidates = enumerate_diagrammes(q, m.dims);
    if (candidates.empty()) throw std::runtime_error("no diagramme has this dimension vector");
    const int ceiling = std::max(1, default_l_max(m.dims));
    int l = l_max ? *l_max : std::min(ceiling, std::max(2, m.total_dimension()));
    std::vector<HPrimeVector> hps;
    for (;;) {
        hps.clear();
        for (const auto& c : candidates) hps.push_back(h_prime_vector(q, c, l));
        std::set<std::map<Item, long>> seen;
        for (const auto& hp : hps) seen.insert(hp.entries);
        if (seen.size() == hps.size()) break;
        if (l_max || l >= ceiling)
            throw std::runtime_error("candidate h'-vectors coincide at L_max = " + std::to_string(l));
        l = std::min(ceiling, 2 * l);
    }

    // Support closed under top substrings, shortest first.
    std::set<Item> support;
    std::vector<Item> pending;
    for (const auto& hp : hps)
        for (const auto& [c, n] : hp.entries)
            if (n != 0 && support.insert(c).second) pending.push_back(c);
    while (!pending.empty()) {
        const Item c = pending.back();
        pending.pop_back();
        const Host h = host_of(q, c);
        for (Span s : top_spans(h, c.length())) {
            Item e = canonical_string(q, substring(q, h, s));
            if (support.insert(e).second) pending.push_back(std::move(e));
        }
    }
    std::vector<Item> order(support.begin(), support.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const Item& a, const Item& b) { return a.length() < b.length(); });

    std::map<Item, long> hprime;
    for (const Item& c : order) {
        long value = hom_nullity(q, realize_string(q, c.walk()), m);
        const Host h = host_of(q, c);
        for (Span s : top_spans(h, c.length() - 1))
            value -= hprime.at(canonical_string(q, substring(q, h, s)));
        hprime[c] = value;
    }

    std::vector<std::size_t> matches;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        bool same = true;
        for (const Item& c : order)
            if (hps[k].at(c) != hprime.at(c)) {
                same = false;
                break;
            }
        if (same) matches.push_back(k);
    }
    if (matches.size() != 1)
        throw std::runtime_error(matches.empty() ? "no diagramme matches the module"
                                                 : "several diagrammes match the module");
    return {candidates[matches.front()], l};
}

// ---- polynomial families ----

Polynomial::Polynomial(const Rational& constant) {
    coeffs_.push_back(constant);
    trim();
}

Polynomial Polynomial::t() {
    Polynomial p;
    p.coeffs_ = {Rational(0), Rational(1)};
    return p;
}

void Polynomial::trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Rational Polynomial::operator()(const Rational& t) const {
    Rational out = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) out = out * t + *it;
    return out;
}

std::string Polynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const Rational& c = coeffs_[k];
        if (sgn(c) == 0) continue;
        const Rational mag = abs(c);
        if (out.empty()) out += sgn(c) < 0 ? "-" : "";
        else out += sgn(c) < 0 ? " - " : " + ";
        const std::string power = k == 0 ? "" : k == 1 ? "t" : "t^" + std::to_string(k);
        if (k == 0) out += mag.get_str();
        else if (mag == 1) out += power;
        else out += mag.get_str() + "*" + power;
    }
    return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out.coeffs_[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out.coeffs_[k] += b.coeffs_[k];
    out.trim();
    return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Polynomial(Rational(-1)) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    if (a.is_zero() || b.is_zero()) return out;
    out.coeffs_.resize(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    out.trim();
    return out;
}

MatrixModule WitnessFamily::at(const Rational& t) const {
    MatrixModule m;
    m.dims = dims;
    for (const PolyMatrix& p : maps) {
        Matrix x(p.rows, p.cols);
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < p.cols; ++c) x(r, c) = p.at(r, c)(t);
        m.maps.push_back(std::move(x));
    }
    return m;
}

bool WitnessFamily::relations_hold_identically(const Quiver& q) const {
    for (const auto& [second, first] : q.relations()) {
        const PolyMatrix& a = maps[second];
        const PolyMatrix& b = maps[first];
        for (std::size_t r = 0; r < a.rows; ++r)
            for (std::size_t c = 0; c < b.cols; ++c) {
                Polynomial sum;
                for (std::size_t k = 0; k < a.cols; ++k) sum = sum + a.at(r, k) * b.at(k, c);
                if (!sum.is_zero()) return false;
            }
    }
    return true;
}

nlohmann::ordered_json to_json(const Quiver& q, const WitnessFamily& w) {
    nlohmann::ordered_json out;
    out["dims"] = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < q.vertex_count(); ++v) out["dims"][q.vertex_name(static_cast<VertexId>(v))] = w.dims[v];
    out["matrices"] = nlohmann::ordered_json::object();
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        auto rows = nlohmann::ordered_json::array();
        const PolyMatrix& x = w.maps[a];
        for (std::size_t r = 0; r < x.rows; ++r) {
            auto row = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < x.cols; ++c) row.push_back(x.at(r, c).to_string());
            rows.push_back(std::move(row));
        }
        out["matrices"][q.arrow(static_cast<ArrowId>(a)).name] = std::move(rows);
    }
    return out;
}

WitnessFamily constant_family(const MatrixModule& m) {
    WitnessFamily w;
    w.dims = m.dims;
    for (const Matrix& x : m.maps) {
        PolyMatrix p{x.rows(), x.cols(), std::vector<Polynomial>(x.rows() * x.cols())};
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) p.at(r, c) = Polynomial(x(r, c));
        w.maps.push_back(std::move(p));
    }
    return w;
}

namespace {

WitnessFamily family_sum(const Quiver& q, const WitnessFamily& a, const WitnessFamily& b) {
    WitnessFamily out;
    out.dims = a.dims;
    for (std::size_t v = 0; v < out.dims.size(); ++v) out.dims[v] += b.dims[v];
    for (std::size_t k = 0; k < q.arrow_count(); ++k) {
        const Arrow& arrow = q.arrow(static_cast<ArrowId>(k));
        const std::size_t rows = static_cast<std::size_t>(out.dims[arrow.target]);
        const std::size_t cols = static_cast<std::size_t>(out.dims[arrow.source]);
        PolyMatrix p{rows, cols, std::vector<Polynomial>(rows * cols)};
        const PolyMatrix& x = a.maps[k];
        const PolyMatrix& y = b.maps[k];
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t c = 0; c < x.cols; ++c) p.at(r, c) = x.at(r, c);
        for (std::size_t r = 0; r < y.rows; ++r)
            for (std::size_t c = 0; c < y.cols; ++c) p.at(x.rows + r, x.cols + c) = y.at(r, c);
        out.maps.push_back(std::move(p));
    }
    return out;
}

WitnessFamily with_rest(const Quiver& q, WitnessFamily core, const Diagramme& rest) {
    if (rest.empty()) return core;
    return family_sum(q, core, constant_family(realize_diagramme(q, rest)));
}

}  // namespace

WitnessFamily deletion_witness(const Quiver& q, const Diagramme& d, const Item& item, int k) {
    if (d.multiplicity(item) < 1) throw std::invalid_argument("item not in the diagramme");
    if (k < 1 || k > item.length()) throw std::invalid_argument("letter index out of range");
    const Host h = host_of(q, item);
    const Layout l = layout_of(q, h, 1);
    WitnessFamily core = constant_family(realize_host(q, h, 1, 1));
    const Letter c = host_letter(h, k);
    const int near = k, far = next_position(h, k);
    PolyMatrix& x = core.maps[c.arrow];
    Polynomial& entry = c.direct ? x.at(l.index(near, 0), l.index(far, 0)) : x.at(l.index(far, 0), l.index(near, 0));
    entry = entry * Polynomial::t();
    Diagramme rest = d;
    rest.remove(q, item);
    return with_rest(q, std::move(core), rest);
}

WitnessResult resolution_witness(const Quiver& q, const Diagramme& d, const Reaching& r) {
    if (r.kind != ReachingKind::Pair) return {std::nullopt, "auto-reachings have no witness family"};
    if (!r.top_item.is_string() || !r.bottom_item.is_string())
        return {std::nullopt, "reachings involving bands have no witness family"};
    Diagramme rest = d;
    rest.remove(q, r.top_item);
    rest.remove(q, r.bottom_item);

    const Layout lx = layout_of(q, r.top_host, 1);
    const Layout ly = layout_of(q, r.bottom_host, 1);
    WitnessFamily core = family_sum(q, constant_family(realize_host(q, r.top_host, 1, 1)),
                                    constant_family(realize_host(q, r.bottom_host, 1, 1)));
    auto x_index = [&](int p) { return lx.index(p, 0); };
    auto y_index = [&](int p) {
        return static_cast<std::size_t>(lx.dims[ly.vertex[static_cast<std::size_t>(p - 1)]]) + ly.index(p, 0);
    };
    const Polynomial t = Polynomial::t();
    const Polynomial one_minus_t = Polynomial(Rational(1)) - t;
    const int j = r.top.j, jb = r.bottom.j;
    // Bottom right arm (direct) also reaches into the top walk.
    if (jb <= r.bottom_host.length()) {
        const Letter c = host_letter(r.bottom_host, jb);
        PolyMatrix& x = core.maps[c.arrow];
        x.at(y_index(jb), y_index(jb + 1)) = one_minus_t;
        x.at(x_index(j), y_index(jb + 1)) = Polynomial(Rational(-1)) * t;
    }
    // Top right arm (inverse) also receives the bottom walk's endpoint.
    if (j <= r.top_host.length()) {
        const Letter c = host_letter(r.top_host, j);
        PolyMatrix& x = core.maps[c.arrow];
        x.at(x_index(j + 1), x_index(j)) = one_minus_t;
        x.at(x_index(j + 1), y_index(jb)) = t;
    }
    return {with_rest(q, std::move(core), rest), {}};
}

std::vector<Rational> seeded_parameters(std::uint64_t seed, int count) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<long> part(1, 97);
    std::vector<Rational> out;
    while (static_cast<int>(out.size()) < count) {
        Rational x(part(gen), part(gen));
        x.canonicalize();
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
}

}  // namespace gentle
