// Walkthrough: first Chern classes on P^2 and higher classes of a split
// bundle, printed as plain text.

#include <iostream>

#include "rigidchern/rigidchern.hpp"

using namespace rigidchern;

int main() {
    const PAdicContext ctx{5, 8};
    const ChartedSpace X(SpaceDescriptor::projective(2, ctx));

    std::cout << "c1(O(d)) on P^2 over Z/5^8, lifts perturbed by random 1-units\n";
    Rng rng(2024);
    for (int d = -2; d <= 3; ++d) {
        LiftedUnitCocycle U = perturb_lifts(X, line_bundle(X, d), rng);
        TotalCochain z = c1_cocycle(X, U);
        std::cout << "  d = " << d << "  closed = " << total_diff(X, z).is_zero() << "  class = " << class_coeff(X, z).signed_lift() << "\n";
    }

    std::cout << "\nChern classes of O(a) + O(b) over P^2\n";
    for (auto [a, b] : {std::pair{1, 2}, std::pair{-1, 2}, std::pair{2, 3}}) {
        ChernVector c = chern_classes(2, {a, b}, ctx);
        std::cout << "  (" << a << ", " << b << "):";
        for (const auto& ci : c.c) std::cout << ' ' << ci.signed_lift();
        std::cout << "\n";
    }

    std::cout << "\nCohomology ranks of P(O + O(1)) over P^1:";
    const ChartedSpace B(SpaceDescriptor::bundle(1, {0, 1}, ctx));
    for (int r : cohomology_ranks(B, 6).free_ranks) std::cout << ' ' << r;
    std::cout << "\n";
}
