#include "toruscohom/fixtures.hpp"

#include <random>

namespace toruscohom::fixtures {

IntMatrix cat() { return IntMatrix(2, {1, 1, 1, 2}); }

IntMatrix fibonacci() { return IntMatrix(2, {1, 1, 1, 0}); }

IntMatrix cubic3() { return IntMatrix(3, {1, 1, 1, 1, 0, 0, 0, 1, 0}); }

IntPolynomial sextic() { return IntPolynomial({1, 2, 3, 0, -1, -2, 1}); }

IntMatrix companion_sextic() { return companion_matrix(sextic()); }

IntMatrix rotation2() { return IntMatrix(2, {0, -1, 1, 0}); }

IntMatrix random_unimodular(int p, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> shear(-2, 2);
    std::uniform_int_distribution<int> index(0, p - 1);
    std::uniform_int_distribution<int> op_count(4, 7);

    for (int attempt = 0; attempt < 500; ++attempt) {
        IntMatrix A = IntMatrix::identity(p);
        const int ops = op_count(rng);
        for (int step = 0; step < ops; ++step) {
            int i = index(rng), j = index(rng);
            if (i == j) j = (j + 1) % p;
            int c = shear(rng);
            if (c == 0) c = 1;
            IntMatrix E = IntMatrix::identity(p);
            E.at(i, j) = c;
            A = A * E;
        }

        Integer largest(0);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                Integer a = abs(A.at(i, j));
                if (a > largest) largest = a;
            }
        if (largest > 8) continue;

        if (is_hyperbolic(roots(char_poly(A)))) return A;
    }
    throw NoConvergenceError("random_unimodular: no hyperbolic sample found for this seed");
}

}  // namespace toruscohom::fixtures
