#include "starksic/lll.hpp"

#include <stdexcept>
#include <utility>

namespace starksic {

void lll_reduce(std::vector<std::vector<mpz_class>>& B) {
    const size_t n = B.size();
    if (n < 2) return;
    const mpq_class delta(99, 100);

    // exact rational GSO; fine at the 3-4 row sizes used for recognition
    std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n, 0));
    std::vector<mpq_class> Bs(n, 0);

    auto recompute = [&]() {
        std::vector<std::vector<mpq_class>> gso(n);
        for (size_t i = 0; i < n; ++i) {
            std::vector<mpq_class> v(B[i].size());
            for (size_t c = 0; c < B[i].size(); ++c) v[c] = mpq_class(B[i][c]);
            for (size_t j = 0; j < i; ++j) {
                mpq_class num = 0;
                for (size_t c = 0; c < v.size(); ++c) num += mpq_class(B[i][c]) * gso[j][c];
                mu[i][j] = Bs[j] == 0 ? mpq_class(0) : mpq_class(num / Bs[j]);
                for (size_t c = 0; c < v.size(); ++c) v[c] -= mu[i][j] * gso[j][c];
            }
            mpq_class nrm = 0;
            for (const mpq_class& x : v) nrm += x * x;
            Bs[i] = nrm;
            gso[i] = std::move(v);
        }
    };

    auto round_q = [](const mpq_class& q) -> mpz_class {
        mpz_class num = q.get_num(), den = q.get_den();
        mpz_class twice = 2 * num + den;  // round(num/den) = floor((2num+den)/(2den))
        mpz_class two_den = 2 * den;
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), two_den.get_mpz_t());
        return r;
    };

    recompute();
    size_t k = 1;
    size_t guard = 0;
    while (k < n) {
        if (++guard > 100000) throw std::runtime_error("lll_reduce: iteration bound exceeded");
        for (size_t j = k; j-- > 0;) {
            mpz_class r = round_q(mu[k][j]);
            if (r != 0) {
                for (size_t c = 0; c < B[k].size(); ++c) B[k][c] -= r * B[j][c];
                recompute();
            }
        }
        mpq_class lhs = Bs[k];
        mpq_class rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * Bs[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(B[k], B[k - 1]);
            recompute();
            k = k > 1 ? k - 1 : 1;
        }
    }
}

}  // namespace starksic
