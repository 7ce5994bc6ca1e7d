#ifndef GEOFLOW_NUMERIC_EVAL_HPP
#define GEOFLOW_NUMERIC_EVAL_HPP

#include <cstdint>
#include <vector>

#include "geoflow/rational_function.hpp"

namespace geoflow {

/// Flat double-precision view of a polynomial for inner integration loops.
struct CompiledPoly {
    std::size_t nvars = 0;
    std::vector<double> coefs;
    std::vector<std::uint32_t> exps; // nvars entries per term, row-major

    static CompiledPoly from(const Polynomial& p) {
        CompiledPoly c;
        c.nvars = p.nvars();
        for (const auto& [m, coef] : p.terms()) {
            c.coefs.push_back(coef.to_double());
            c.exps.insert(c.exps.end(), m.begin(), m.end());
        }
        return c;
    }

    double eval(const double* x) const {
        double acc = 0.0;
        const std::uint32_t* e = exps.data();
        for (double c : coefs) {
            double t = c;
            for (std::size_t i = 0; i < nvars; ++i) {
                std::uint32_t k = e[i];
                double base = x[i];
                while (k >= 1) {
                    if (k & 1u) t *= base;
                    base *= base;
                    k >>= 1u;
                    if (k == 0) break;
                }
            }
            acc += t;
            e += nvars;
        }
        return acc;
    }
};

struct CompiledRF {
    CompiledPoly num, den;
    bool den_is_one = false;

    static CompiledRF from(const RationalFunction& f) {
        CompiledRF c;
        c.num = CompiledPoly::from(f.num());
        c.den = CompiledPoly::from(f.den());
        c.den_is_one = f.den().is_constant() && f.den().constant_value().is_one();
        return c;
    }

    double eval(const double* x) const {
        double n = num.eval(x);
        return den_is_one ? n : n / den.eval(x);
    }
};

} // namespace geoflow

#endif
