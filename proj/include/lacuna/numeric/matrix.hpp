#ifndef LACUNA_NUMERIC_MATRIX_HPP
#define LACUNA_NUMERIC_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <lacuna/error.hpp>
#include <lacuna/numeric/complex_ball.hpp>

namespace lacuna
{

// Dense row-major matrix over complex balls.
class BallMatrix
{
public:
    BallMatrix() = default;
    BallMatrix(std::size_t rows, std::size_t cols, mpfr_prec_t prec)
        : rows_(rows), cols_(cols), data_(rows * cols, ComplexBall(prec))
    {
    }

    static BallMatrix identity(std::size_t n, mpfr_prec_t prec)
    {
        BallMatrix m(n, n, prec);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = ComplexBall::from_int(1, prec);
        }
        return m;
    }

    std::size_t rows() const noexcept
    {
        return rows_;
    }
    std::size_t cols() const noexcept
    {
        return cols_;
    }
    ComplexBall &operator()(std::size_t i, std::size_t j)
    {
        return data_[i * cols_ + j];
    }
    const ComplexBall &operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * cols_ + j];
    }

    friend BallMatrix operator*(const BallMatrix &a, const BallMatrix &b)
    {
        if (a.cols_ != b.rows_) {
            throw DomainError("matrix dimension mismatch");
        }
        const mpfr_prec_t p = a.rows_ && a.cols_ ? a(0, 0).prec() : 53;
        BallMatrix c(a.rows_, b.cols_, p);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) {
                ComplexBall s(p);
                for (std::size_t k = 0; k < a.cols_; ++k) {
                    s += a(i, k) * b(k, j);
                }
                c(i, j) = std::move(s);
            }
        }
        return c;
    }
    std::vector<ComplexBall> apply(const std::vector<ComplexBall> &v) const
    {
        if (v.size() != cols_) {
            throw DomainError("matrix-vector dimension mismatch");
        }
        std::vector<ComplexBall> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            ComplexBall s(v.empty() ? 53 : v[0].prec());
            for (std::size_t k = 0; k < cols_; ++k) {
                s += (*this)(i, k) * v[k];
            }
            out.push_back(std::move(s));
        }
        return out;
    }
    BallMatrix conj() const
    {
        BallMatrix m(*this);
        for (auto &x : m.data_) {
            x = x.conj();
        }
        return m;
    }
    BallMatrix mid() const
    {
        BallMatrix m(*this);
        for (auto &x : m.data_) {
            x = x.mid_ball();
        }
        return m;
    }
    bool overlaps(const BallMatrix &o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            return false;
        }
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!data_[k].overlaps(o.data_[k])) {
                return false;
            }
        }
        return true;
    }
    Mag max_rad() const
    {
        Mag m;
        for (const auto &x : data_) {
            m = Mag::max(m, x.rad());
        }
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<ComplexBall> data_;
};

namespace detail
{

inline double approx_abs(const ComplexBall &z)
{
    return std::hypot(z.re().mid().to_double(), z.im().mid().to_double());
}

} // namespace detail

// Solves A X = B by Gaussian elimination with partial pivoting on midpoint
// magnitudes. Throws PrecisionError if a pivot ball contains zero.
inline BallMatrix solve(BallMatrix a, BallMatrix b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n) {
        throw DomainError("solve: dimension mismatch");
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = -1;
        for (std::size_t i = col; i < n; ++i) {
            const double v = detail::approx_abs(a(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (a(piv, col).contains_zero()) {
            throw PrecisionError("solve: pivot enclosure contains zero (singular or ill-conditioned system)");
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                std::swap(b(piv, j), b(col, j));
            }
        }
        const ComplexBall inv = ComplexBall::from_int(1, a(col, col).prec()) / a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const ComplexBall f = a(i, col) * inv;
            for (std::size_t j = col; j < n; ++j) {
                a(i, j) -= f * a(col, j);
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                b(i, j) -= f * b(col, j);
            }
        }
    }
    BallMatrix x(n, b.cols(), a(0, 0).prec());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t ii = n; ii-- > 0;) {
            ComplexBall s = b(ii, j);
            for (std::size_t k = ii + 1; k < n; ++k) {
                s -= a(ii, k) * x(k, j);
            }
            x(ii, j) = s / a(ii, ii);
        }
    }
    return x;
}

inline std::vector<ComplexBall> solve(const BallMatrix &a, const std::vector<ComplexBall> &rhs)
{
    BallMatrix b(rhs.size(), 1, rhs.empty() ? 53 : rhs[0].prec());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        b(i, 0) = rhs[i];
    }
    const BallMatrix x = solve(a, b);
    std::vector<ComplexBall> out;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        out.push_back(x(i, 0));
    }
    return out;
}

inline BallMatrix inverse(const BallMatrix &a)
{
    return solve(a, BallMatrix::identity(a.rows(), a.rows() ? a(0, 0).prec() : 53));
}

} // namespace lacuna

#endif
