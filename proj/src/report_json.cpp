#include <json.hpp>

#include "ddopt/analysis.hpp"

namespace ddopt {

std::string to_json(const ConstantsReport& r) {
    nlohmann::ordered_json j;
    j["gamma"] = r.gamma;
    j["beta_x"] = r.beta_x;
    j["beta_z"] = r.beta_z;
    j["L_z"] = r.L_z;
    j["eps"] = r.eps;
    j["eps_g"] = r.eps_g;
    j["g_norm"] = r.g_norm;
    j["lam_min_gram"] = r.lam_min_gram;
    j["L_xstar"] = r.L_xstar;
    j["gamma_d"] = r.gamma_d;
    j["L_d"] = r.L_d;
    j["rho1"] = r.rho1;
    j["rho2"] = r.rho2;
    j["rho3"] = r.rho3;
    j["rho4"] = r.rho4;
    j["a1"] = r.a1;
    j["a2"] = r.a2;
    j["a3"] = r.a3;
    j["b1"] = r.b1;
    j["b2"] = r.b2;
    j["b3"] = r.b3;
    j["alpha_bar_sqrt"] = r.alpha_bar_sqrt;
    j["alpha"] = r.alpha;
    j["window_defined"] = r.window_defined;
    if (r.window_defined) {
        j["s1"] = r.s1;
        if (std::isfinite(r.s2)) j["s2"] = r.s2; else j["s2"] = "inf";
        j["eta_mid"] = r.eta_mid();
    }
    j["rcm_condition"] = r.rcm_condition;
    j["rda_condition_9"] = r.rda_condition_9;
    j["rda_condition_10"] = r.rda_condition_10;
    j["rda_fixed_obj_condition"] = r.rda_fixed_obj_condition;
    return j.dump(2);
}

std::string to_json(const BoundReport& b) {
    nlohmann::ordered_json j;
    j["x_s"] = b.x_s;
    j["x_o"] = b.x_o;
    j["lambda_s_star"] = b.lambda_s_star;
    j["measured_distance"] = b.measured_distance;
    j["bound_value"] = b.bound_value;
    j["bound_holds"] = b.bound_holds;
    return j.dump(2);
}

}  // namespace ddopt
