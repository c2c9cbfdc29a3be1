#include "vbrpc/online_gwf.hpp"

#include <algorithm>
#include <cmath>

#include "vbrpc/core.hpp"
#include "vbrpc/offline_pm.hpp"

namespace vbrpc {

void GroupConfig::validate() const {
    if (Ng < 1 || L < 1) throw InvalidInput("GroupConfig: Ng and L must be >= 1");
    if (!(alpha_hat > 0.0 && alpha_hat <= 1.0))
        throw InvalidInput("GroupConfig: alpha_hat must lie in (0, 1]");
}

GwfSolution solve_gwf(const VideoTrace& trace, const FadingPath& fading,
                      const SystemParams& params, const GroupConfig& cfg) {
    params.validate();
    cfg.validate();
    const std::size_t T = trace.slots();
    const std::size_t M = params.M;
    if (T == 0) throw InvalidInput("solve_gwf: empty trace");
    if (fading.channels != M || fading.slots != T)
        throw InvalidInput("solve_gwf: fading path does not match trace/params");
    if (!(params.Fmax > trace.max_frame()))
        throw InvalidInput("solve_gwf: buffer must exceed the largest frame");

    const SlotMatrix& gains = fading.gains.gains;
    const double decay = cfg.alpha_hat * cfg.alpha_hat;  // gain scale per step ahead

    SlotMatrix P(M, T, 0.0);
    std::vector<double> committed_bits(T, 0.0);
    std::vector<double> levels(T, 0.0);

    for (std::size_t base = 0; base < T; base += cfg.group_span()) {
        const std::size_t g = std::min(cfg.group_span(), T - base);

        // Group-local cumulative frame sizes, u[l] = F(base+1) + ... + F(base+l).
        std::vector<double> u(g + 1, 0.0);
        for (std::size_t l = 0; l < g; ++l) u[l + 1] = u[l] + trace.frames[base + l];

        double past_bits = 0.0;  // realized deliveries inside this group
        for (std::size_t j = 1; j <= g; ++j) {
            const std::size_t s = base + j - 1;  // global slot, 0-based
            const std::size_t m = g - j + 1;     // residual horizon length

            // Delivered beyond what the group has consumed so far. The cap
            // curve must charge this surplus against the buffer, so it enters
            // unclamped; only the demand targets clamp at zero.
            const double surplus = std::max(0.0, past_bits - u[j - 1]);

            std::vector<double> demand(m);
            std::vector<double> cap(m);
            double prev = 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                const std::size_t l = j + r;  // group-local slot index
                const double cur = std::max(u[l] - past_bits, 0.0);
                demand[r] = std::max(0.0, cur - prev);
                prev = cur;
                cap[r] = (u[l - 1] - u[j - 1]) + params.Fmax - surplus;
            }

            SlotMatrix horizon(M, m);
            auto now = gains.slot(s);
            std::copy(now.begin(), now.end(), horizon.slot(0).begin());
            double scale = 1.0;
            for (std::size_t r = 1; r < m; ++r) {
                scale *= decay;
                auto dst = horizon.slot(r);
                for (std::size_t i = 0; i < M; ++i) dst[i] = scale * now[i];
            }

            PmSolution plan = solve_pm_constrained(demand, horizon, params, cap);

            auto src = plan.schedule.P.slot(0);
            std::copy(src.begin(), src.end(), P.slot(s).begin());
            committed_bits[s] = plan.schedule.H[0];
            levels[s] = plan.profile.W[0];
            past_bits += committed_bits[s];
        }
    }

    GwfSolution sol;
    sol.schedule = PowerSchedule::from_powers(std::move(P), fading.gains, params);
    sol.report = verify_schedule(sol.schedule, trace, params);
    sol.levels = std::move(levels);
    return sol;
}

}  // namespace vbrpc
