#include "knds/angular.hpp"
#include "knds/radial.hpp"

namespace knds {

ReducedMatrix reduced_matrix(const Geometry& g, double lambda, double k, int l) {
    ReducedMatrix out;
    out.lambda = lambda;
    out.k = k;
    out.l = l;
    out.mu = angular_eigenvalue(angular_problem(g.params(), lambda, k), l);
    const ScatteringRecord rec = scatter(g, k, lambda, out.mu);
    out.S = {rec.phys.T, rec.phys.R, rec.phys.L, rec.phys.T};
    return out;
}

}  // namespace knds
