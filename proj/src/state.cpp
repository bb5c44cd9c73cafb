#include "kinlab/state.hpp"

#include <cmath>

namespace kinlab {

void FluidState::check_valid() const {
    for (std::size_t p = 0; p < grid->total; ++p) {
        bool bad = !(rho[p] > 0) || !std::isfinite(rho[p]) || !std::isfinite(S[p]);
        for (int d = 0; d < grid->n && !bad; ++d) bad = !std::isfinite(u.comp[d][p]);
        if (bad) {
            Vec x = grid->point(p);
            std::string loc;
            for (int d = 0; d < grid->n; ++d)
                loc += format_double(x[d]) + (d + 1 < grid->n ? ", " : "");
            throw StateError("invalid fluid state (rho = " + format_double(rho[p]) +
                             ") at x = (" + loc + "), t = " + format_double(t));
        }
    }
}

FluidState make_state(const Grid& grid, const std::vector<FieldExpr>& u_expr,
                      const FieldExpr& rho_expr, const FieldExpr& S_expr, double t) {
    if (int(u_expr.size()) != grid.n)
        throw ConfigError("initial condition needs one velocity expression per axis");
    FluidState st(grid);
    st.t = t;
    for (std::size_t p = 0; p < grid.total; ++p) {
        Vec x = grid.point(p);
        for (int d = 0; d < grid.n; ++d) st.u.comp[d][p] = u_expr[d].value(x);
        st.rho[p] = rho_expr.value(x);
        st.S[p] = S_expr.value(x);
    }
    st.check_valid();
    return st;
}

}  // namespace kinlab
