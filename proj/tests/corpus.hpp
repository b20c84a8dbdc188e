#pragma once

#include "trilie/constructions.hpp"

#include <string>
#include <vector>

namespace corpus {

using namespace trilie;

inline Vector e(std::size_t n, std::size_t i) { return unit_vector(n, i); }

/// [x1,x2,x4] = x3
inline StructureConstants remark1()
{
    StructureConstants sc(4);
    sc.set_bracket(0, 1, 3, e(4, 2));
    return sc;
}

/// omega(x1,x4) = omega(x2,x3) = 1, skew-extended.
inline BilinearForm remark1_omega()
{
    Matrix m(4, 4);
    m(0, 3) = 1;
    m(3, 0) = -1;
    m(1, 2) = 1;
    m(2, 1) = -1;
    return BilinearForm(m);
}

inline LinearMap remark1_d() { return LinearMap(Matrix::diagonal({2, -1, -1, -2})); }

/// Five-dimensional nilpotent: [e1,e2,e3] = e4, [e1,e2,e4] = e5.
inline StructureConstants n5()
{
    StructureConstants sc(5);
    sc.set_bracket(0, 1, 2, e(5, 3));
    sc.set_bracket(0, 1, 3, e(5, 4));
    return sc;
}

/// The simple four-dimensional algebra A4: [e2,e3,e4] = e1, [e1,e3,e4] = -e2,
/// [e1,e2,e4] = e3, [e1,e2,e3] = -e4.
inline StructureConstants a4()
{
    StructureConstants sc(4);
    sc.set_bracket(1, 2, 3, e(4, 0));
    sc.set_bracket(0, 2, 3, Vector{0, -1, 0, 0});
    sc.set_bracket(0, 1, 3, e(4, 2));
    sc.set_bracket(0, 1, 2, Vector{0, 0, 0, -1});
    return sc;
}

inline StructureConstants abelian(std::size_t n) { return StructureConstants(n); }

/// [e1,e2,e3] = e1 and [e1,e2,e4] = e4; violates the Filippov identity.
inline StructureConstants broken()
{
    StructureConstants sc(4);
    sc.set_bracket(0, 1, 2, e(4, 0));
    sc.set_bracket(0, 1, 3, e(4, 3));
    return sc;
}

struct Named {
    std::string name;
    StructureConstants sc;
};

/// Base algebras fed to the truncated-current chain.
inline std::vector<Named> bases()
{
    return {{"remark1", remark1()}, {"n5", n5()}, {"a4", a4()}, {"abelian3", abelian(3)}};
}

inline BilinearForm identity_form(std::size_t n) { return BilinearForm(Matrix::identity(n)); }

}  // namespace corpus
