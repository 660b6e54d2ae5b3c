#include "clf/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <Eigen/Cholesky>

#include "clf/errors.hpp"
#include "clf/random.hpp"
#include "clf/simplex.hpp"
#include "clf/spectral.hpp"

namespace clf {

using simplex::in_convex_hull;
using spectral::inverse_spd;
using spectral::lambda_max;
using spectral::lambda_min;

namespace {

Index isqrt_exact(Index v) {
    const auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v))));
    if (r * r != v) throw ConfigError("ellipsoid center length is not a perfect square");
    return r;
}

Vector vec_of(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace

Index state_dim(const UncertaintySet& omega) {
    return std::visit(
        [](const auto& s) -> Index {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) return s.A_lo.rows();
            if constexpr (std::is_same_v<T, EllipsoidA>) return isqrt_exact(s.c.size());
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                if (s.vertices.empty()) throw ConfigError("polytope has no vertices");
                return s.vertices.front().first.rows();
            }
        },
        omega);
}

Index input_dim(const UncertaintySet& omega) {
    return std::visit(
        [](const auto& s) -> Index {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) return s.B_lo.cols();
            if constexpr (std::is_same_v<T, EllipsoidA>) return s.B_fixed.cols();
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                if (s.vertices.empty()) throw ConfigError("polytope has no vertices");
                return s.vertices.front().second.cols();
            }
        },
        omega);
}

void validate(const UncertaintySet& omega) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) {
                const Index n = s.A_lo.rows();
                if (n == 0 || s.A_lo.cols() != n)
                    throw ConfigError("interval set: A bounds must be square and nonempty");
                if (s.A_hi.rows() != n || s.A_hi.cols() != n)
                    throw ConfigError("interval set: A_lo/A_hi shape mismatch");
                if (s.B_lo.rows() != n || s.B_hi.rows() != n || s.B_lo.cols() != s.B_hi.cols())
                    throw ConfigError("interval set: B bounds shape mismatch");
                if (s.B_lo.cols() == 0) throw ConfigError("interval set: B must have at least one column");
                require_finite(s.A_lo, "A_lo");
                require_finite(s.A_hi, "A_hi");
                require_finite(s.B_lo, "B_lo");
                require_finite(s.B_hi, "B_hi");
                if (((s.A_hi - s.A_lo).array() < 0.0).any() || ((s.B_hi - s.B_lo).array() < 0.0).any())
                    throw ConfigError("interval set: lower bound exceeds upper bound");
            }
            if constexpr (std::is_same_v<T, EllipsoidA>) {
                const Index n = isqrt_exact(s.c.size());
                if (n == 0) throw ConfigError("ellipsoid set: empty center");
                if (s.Q.order() != s.c.size())
                    throw ConfigError("ellipsoid set: shape matrix order must match center length");
                require_finite(s.c, "ellipsoid center");
                if (s.B_fixed.rows() != n || s.B_fixed.cols() == 0)
                    throw ConfigError("ellipsoid set: B_fixed shape mismatch");
                require_finite(s.B_fixed, "B_fixed");
                if (lambda_min(s.Q) <= 0.0)
                    throw ConfigError("ellipsoid set: shape matrix must be positive definite");
            }
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                if (s.vertices.empty()) throw ConfigError("polytope has no vertices");
                const Index n = s.vertices.front().first.rows();
                const Index m = s.vertices.front().second.cols();
                if (n == 0 || m == 0) throw ConfigError("polytope set: empty vertex matrices");
                for (const auto& [a, b] : s.vertices) {
                    if (a.rows() != n || a.cols() != n)
                        throw ConfigError("polytope set: A vertex must be square of fixed order");
                    if (b.rows() != n || b.cols() != m)
                        throw ConfigError("polytope set: B vertex shape mismatch");
                    require_finite(a, "polytope A vertex");
                    require_finite(b, "polytope B vertex");
                }
            }
        },
        omega);
}

bool contains(const UncertaintySet& omega, const Eigen::Ref<const Matrix>& a,
              const Eigen::Ref<const Matrix>& b, double tol) {
    const Index n = state_dim(omega);
    const Index m = input_dim(omega);
    if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != m) return false;
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) {
                return ((a - s.A_lo).array() >= -tol).all() && ((s.A_hi - a).array() >= -tol).all() &&
                       ((b - s.B_lo).array() >= -tol).all() && ((s.B_hi - b).array() >= -tol).all();
            }
            if constexpr (std::is_same_v<T, EllipsoidA>) {
                if (((b - s.B_fixed).array().abs() > tol).any()) return false;
                const Vector d = vec_of(Matrix(a)) - s.c;
                return d.dot(s.Q.mat() * d) - 1.0 <= tol;
            }
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                const Index dim = n * n + n * m;
                Matrix points(dim, static_cast<Index>(s.vertices.size()));
                for (Index k = 0; k < points.cols(); ++k) {
                    const auto& [av, bv] = s.vertices[static_cast<std::size_t>(k)];
                    points.col(k).head(n * n) = vec_of(av);
                    points.col(k).tail(n * m) = vec_of(bv);
                }
                Vector q(dim);
                q.head(n * n) = vec_of(Matrix(a));
                q.tail(n * m) = vec_of(Matrix(b));
                return in_convex_hull(points, q, tol);
            }
        },
        omega);
}

std::pair<Matrix, Matrix> representative(const UncertaintySet& omega) {
    return std::visit(
        [](const auto& s) -> std::pair<Matrix, Matrix> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>)
                return {0.5 * (s.A_lo + s.A_hi), 0.5 * (s.B_lo + s.B_hi)};
            if constexpr (std::is_same_v<T, EllipsoidA>) {
                const Index n = isqrt_exact(s.c.size());
                return {unvec(s.c, n, n), s.B_fixed};
            }
            if constexpr (std::is_same_v<T, PolytopeVerts>) return s.vertices.front();
        },
        omega);
}

double magnitude_scale(const UncertaintySet& omega) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) {
                return std::max({s.A_lo.cwiseAbs().maxCoeff(), s.A_hi.cwiseAbs().maxCoeff(),
                                 s.B_lo.cwiseAbs().maxCoeff(), s.B_hi.cwiseAbs().maxCoeff()});
            }
            if constexpr (std::is_same_v<T, EllipsoidA>) {
                const Vector radii = inverse_spd(s.Q).mat().diagonal().cwiseSqrt();
                return std::max((s.c.cwiseAbs() + radii).maxCoeff(), s.B_fixed.cwiseAbs().maxCoeff());
            }
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                double best = 0.0;
                for (const auto& [a, b] : s.vertices)
                    best = std::max({best, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
                return best;
            }
        },
        omega);
}

std::pair<Matrix, Matrix> sample(const UncertaintySet& omega, std::mt19937_64& rng) {
    return std::visit(
        [&](const auto& s) -> std::pair<Matrix, Matrix> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) {
                Matrix a = s.A_lo;
                Matrix b = s.B_lo;
                for (Index j = 0; j < a.cols(); ++j)
                    for (Index i = 0; i < a.rows(); ++i)
                        a(i, j) = rnd::uniform(rng, s.A_lo(i, j), s.A_hi(i, j));
                for (Index j = 0; j < b.cols(); ++j)
                    for (Index i = 0; i < b.rows(); ++i)
                        b(i, j) = rnd::uniform(rng, s.B_lo(i, j), s.B_hi(i, j));
                return {a, b};
            }
            if constexpr (std::is_same_v<T, EllipsoidA>) {
                const Index d = s.c.size();
                const Index n = isqrt_exact(d);
                Vector u(d);
                double norm2 = 0.0;
                do {
                    for (Index j = 0; j < d; ++j) u(j) = rnd::gaussian(rng);
                    norm2 = u.squaredNorm();
                } while (norm2 == 0.0);
                u /= std::sqrt(norm2);
                const double r = std::pow(rnd::uniform01(rng), 1.0 / static_cast<double>(d));
                Eigen::LLT<Matrix> llt(s.Q.mat());
                if (llt.info() != Eigen::Success)
                    throw NotSPD("ellipsoid shape matrix is not positive definite");
                // z = c + L^-T y maps the unit ball {||y|| <= 1} onto the set.
                const Vector z =
                    s.c + llt.matrixU().solve(Vector(r * u));
                return {unvec(z, n, n), s.B_fixed};
            }
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                const auto mcount = s.vertices.size();
                std::vector<double> w(mcount);
                double total = 0.0;
                for (auto& wk : w) {
                    wk = rnd::exponential(rng);
                    total += wk;
                }
                Matrix a = Matrix::Zero(s.vertices.front().first.rows(), s.vertices.front().first.cols());
                Matrix b = Matrix::Zero(s.vertices.front().second.rows(), s.vertices.front().second.cols());
                for (std::size_t k = 0; k < mcount; ++k) {
                    const double wk = w[k] / total;
                    a += wk * s.vertices[k].first;
                    b += wk * s.vertices[k].second;
                }
                return {a, b};
            }
        },
        omega);
}

std::pair<Matrix, Matrix> BoxParam::decode(const Vector& z) const {
    if (z.size() != lo.size()) throw DimensionError("decode: coordinate length mismatch");
    Matrix a = a0;
    Matrix b = b0;
    for (Index j = 0; j < z.size(); ++j) {
        a += z(j) * basis[static_cast<std::size_t>(j)].first;
        b += z(j) * basis[static_cast<std::size_t>(j)].second;
    }
    return {a, b};
}

BoxParam box_param(const UncertaintySet& omega, double poly_tol) {
    validate(omega);
    BoxParam bp;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IntervalAB>) {
                const Index n = s.A_lo.rows();
                const Index m = s.B_lo.cols();
                std::vector<double> lo, hi;
                bp.a0 = s.A_lo;
                bp.b0 = s.B_lo;
                std::vector<std::pair<bool, std::pair<Index, Index>>> slots;
                for (Index j = 0; j < n; ++j)
                    for (Index i = 0; i < n; ++i)
                        if (s.A_lo(i, j) < s.A_hi(i, j)) {
                            bp.a0(i, j) = 0.0;
                            slots.push_back({false, {i, j}});
                            lo.push_back(s.A_lo(i, j));
                            hi.push_back(s.A_hi(i, j));
                        }
                for (Index j = 0; j < m; ++j)
                    for (Index i = 0; i < n; ++i)
                        if (s.B_lo(i, j) < s.B_hi(i, j)) {
                            bp.b0(i, j) = 0.0;
                            slots.push_back({true, {i, j}});
                            lo.push_back(s.B_lo(i, j));
                            hi.push_back(s.B_hi(i, j));
                        }
                const Index q = static_cast<Index>(slots.size());
                bp.lo = Eigen::Map<const Vector>(lo.data(), q);
                bp.hi = Eigen::Map<const Vector>(hi.data(), q);
                for (const auto& [in_b, rc] : slots) {
                    Matrix da = Matrix::Zero(n, n);
                    Matrix db = Matrix::Zero(n, m);
                    (in_b ? db : da)(rc.first, rc.second) = 1.0;
                    bp.basis.emplace_back(std::move(da), std::move(db));
                }
                bp.constraint = [](const Vector&) { return -1.0; };
                bp.constraint_grad_scale = 0.0;
                const Vector blo = bp.lo, bhi = bp.hi;
                bp.project = [blo, bhi](const Vector& z) -> Vector {
                    return z.cwiseMax(blo).cwiseMin(bhi);
                };
                bp.encode = [slots](const Matrix& a, const Matrix& b) -> Vector {
                    Vector z(static_cast<Index>(slots.size()));
                    for (std::size_t k = 0; k < slots.size(); ++k) {
                        const auto& [in_b, rc] = slots[k];
                        z(static_cast<Index>(k)) = (in_b ? b : a)(rc.first, rc.second);
                    }
                    return z;
                };
            }
            if constexpr (std::is_same_v<T, EllipsoidA>) {
                const Index d = s.c.size();
                const Index n = isqrt_exact(d);
                const Vector radii = inverse_spd(s.Q).mat().diagonal().cwiseSqrt();
                bp.lo = s.c - radii;
                bp.hi = s.c + radii;
                bp.a0 = Matrix::Zero(n, n);
                bp.b0 = s.B_fixed;
                for (Index j = 0; j < d; ++j) {
                    Matrix da = Matrix::Zero(n, n);
                    da(j % n, j / n) = 1.0;  // column-major coordinate j
                    bp.basis.emplace_back(std::move(da), Matrix::Zero(n, s.B_fixed.cols()));
                }
                const Vector c = s.c;
                const Matrix q = s.Q.mat();
                bp.constraint = [c, q](const Vector& z) -> double {
                    const Vector dlt = z - c;
                    return dlt.dot(q * dlt) - 1.0;
                };
                bp.constraint_grad_scale = 2.0 * lambda_max(s.Q) * radii.norm();
                bp.project = [c, q](const Vector& z) -> Vector {
                    const Vector dlt = z - c;
                    const double quad = dlt.dot(q * dlt);
                    if (quad <= 1.0) return z;
                    return c + dlt / std::sqrt(quad);
                };
                bp.encode = [n](const Matrix& a, const Matrix&) -> Vector {
                    return Eigen::Map<const Vector>(a.data(), n * n);
                };
            }
            if constexpr (std::is_same_v<T, PolytopeVerts>) {
                const Index mcount = static_cast<Index>(s.vertices.size());
                const Index n = s.vertices.front().first.rows();
                const Index m = s.vertices.front().second.cols();
                bp.lo = Vector::Zero(mcount);
                bp.hi = Vector::Ones(mcount);
                bp.a0 = Matrix::Zero(n, n);
                bp.b0 = Matrix::Zero(n, m);
                bp.basis = s.vertices;
                bp.constraint = [poly_tol](const Vector& w) -> double {
                    return std::abs(w.sum() - 1.0) - poly_tol;
                };
                bp.constraint_grad_scale = std::sqrt(static_cast<double>(mcount));
                bp.project = [](const Vector& w) -> Vector {
                    // Euclidean projection onto the probability simplex:
                    // w_i -> max(w_i - mu, 0) with the threshold mu chosen by
                    // the sort-and-scan rule so the result sums to one. An
                    // exact projection keeps descent steps tangential instead
                    // of collapsing them toward the barycenter.
                    std::vector<double> u(w.data(), w.data() + w.size());
                    std::sort(u.begin(), u.end(), std::greater<>());
                    double cum = 0.0, mu = u.front() - 1.0;
                    for (std::size_t j = 0; j < u.size(); ++j) {
                        cum += u[j];
                        const double mu_j = (cum - 1.0) / static_cast<double>(j + 1);
                        if (u[j] - mu_j > 0.0) mu = mu_j;
                    }
                    return (w.array() - mu).max(0.0);
                };
                auto verts = s.vertices;
                bp.encode = [verts, n, m](const Matrix& a, const Matrix& b) -> Vector {
                    const Index dim = n * n + n * m;
                    Matrix points(dim, static_cast<Index>(verts.size()));
                    for (Index k = 0; k < points.cols(); ++k) {
                        const auto& [av, bv] = verts[static_cast<std::size_t>(k)];
                        points.col(k).head(n * n) = Eigen::Map<const Vector>(av.data(), n * n);
                        points.col(k).tail(n * m) = Eigen::Map<const Vector>(bv.data(), n * m);
                    }
                    Vector q(dim);
                    q.head(n * n) = Eigen::Map<const Vector>(a.data(), n * n);
                    q.tail(n * m) = Eigen::Map<const Vector>(b.data(), n * m);
                    Vector weights;
                    if (!in_convex_hull(points, q, 1e-7, &weights))
                        throw InvalidMatrix("encode: matrix pair is not in the polytope");
                    return weights;
                };
            }
        },
        omega);
    return bp;
}

VertexStream::VertexStream(const IntervalAB& s) {
    validate(UncertaintySet{s});
    a_ = s.A_lo;
    b_ = s.B_lo;
    for (Index j = 0; j < a_.cols(); ++j)
        for (Index i = 0; i < a_.rows(); ++i)
            if (s.A_lo(i, j) < s.A_hi(i, j))
                coords_.push_back({false, i, j, s.A_lo(i, j), s.A_hi(i, j)});
    for (Index j = 0; j < b_.cols(); ++j)
        for (Index i = 0; i < b_.rows(); ++i)
            if (s.B_lo(i, j) < s.B_hi(i, j))
                coords_.push_back({true, i, j, s.B_lo(i, j), s.B_hi(i, j)});
    if (coords_.size() > 40)
        throw TooManyVertices("interval set has more than 2^40 vertices");
    count_ = std::uint64_t{1} << coords_.size();
    seek(0);
}

void VertexStream::seek(std::uint64_t k) {
    if (k > count_) throw InvalidState("vertex stream seek past end");
    pos_ = k;
    if (k == count_) return;
    gray_ = k ^ (k >> 1);
    for (std::size_t c = 0; c < coords_.size(); ++c) {
        const bool high = (gray_ >> c) & 1u;
        const auto& cd = coords_[c];
        (cd.in_b ? b_ : a_)(cd.row, cd.col) = high ? cd.hi : cd.lo;
    }
}

bool VertexStream::next(Matrix& a, Matrix& b) {
    if (pos_ >= count_) return false;
    a = a_;
    b = b_;
    ++pos_;
    if (pos_ < count_) {
        const std::uint64_t g = pos_ ^ (pos_ >> 1);
        const std::uint64_t diff = g ^ gray_;
        std::size_t c = 0;
        while (((diff >> c) & 1u) == 0) ++c;
        const auto& cd = coords_[c];
        (cd.in_b ? b_ : a_)(cd.row, cd.col) = ((g >> c) & 1u) ? cd.hi : cd.lo;
        gray_ = g;
    }
    return true;
}

}  // namespace clf
