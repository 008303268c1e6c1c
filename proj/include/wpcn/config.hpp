#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wpcn {

/// How the configured interference strength enters the AP's SINR.
enum class InterferenceConvention {
    /// interference_power_dbm is the received residual power P_s|f|^2 at the AP.
    ReceivedPower,
    /// interference_power_dbm is read as the gain |f|^2 in dB; the power is P_s|f|^2.
    ChannelGain,
};

/**
 * Physical and protocol parameters of one power station, one access point and
 * N users placed uniformly on [0, wet_radius] from the power station.
 *
 * Defaults reproduce the reference scenario: N = 20, r_d = 50 m, r_e = 20 m,
 * L_0 = 0.1 at d_0 = 1 m, alpha = 3, noise -70 dBm, interference -63 dBm,
 * eta = 0.5, P_s = 1 W and tau_0 = 1/(N+1).
 */
struct NetworkConfig {
    int n_users = 20;
    double dist_ps_ap = 50.0;  ///< r_d, meters
    double wet_radius = 20.0;  ///< r_e, meters
    double ps_power = 1.0;     ///< P_s, watts
    double noise_power_dbm = -70.0;
    double interference_power_dbm = -63.0;
    double path_loss_ref = 0.1;  ///< L_0
    double ref_distance = 1.0;   ///< d_0, meters
    double path_loss_exp = 3.0;  ///< alpha
    double energy_efficiency = 0.5;
    double tau0 = 1.0 / 21.0;  ///< dedicated WET fraction of the block
    double fading_gain_wet = 1.0;
    double fading_gain_wit = 1.0;
    InterferenceConvention interference_convention = InterferenceConvention::ReceivedPower;
    /// Keep the user-to-user term of the received WET signal in the Monte Carlo pipeline.
    bool inter_user_interference = false;
    double inter_user_gain_db = -60.0;

    bool operator==(const NetworkConfig&) const = default;
};

/// Scalars shared by every rate formula.
struct DerivedConstants {
    double a = 0.0;      ///< eta P_s L_0^2 d_0^{2 alpha} |g|^2 |h|^2 / sigma^2
    double b = 1.0;      ///< 1 + P_s|f|^2 / sigma^2
    double kappa = 0.0;  ///< N tau_0 / (1 - tau_0)
    double tau_n = 0.0;  ///< (1 - tau_0) / N
    double noise_power_w = 0.0;
    double interference_power_w = 0.0;
};

double dbm_to_watts(double dbm);

/// Throws InvalidConfig naming the first violated invariant.
void validate(const NetworkConfig& cfg);

DerivedConstants derive_constants(const NetworkConfig& cfg);

std::string_view to_string(InterferenceConvention c);

/// Sets one field from its textual value. Keys are the NetworkConfig member names.
void set_field(NetworkConfig& cfg, std::string_view key, std::string_view value);

/// Field names accepted by set_field, in declaration order.
const std::vector<std::string>& config_keys();

/// Flat `key = value` text; `#` starts a comment. Fields not mentioned keep `base`'s value.
NetworkConfig parse_config(std::istream& in, NetworkConfig base = {});
NetworkConfig load_config(const std::filesystem::path& path, NetworkConfig base = {});

/// Every field as (key, text) in declaration order; numbers round-trip exactly.
std::vector<std::pair<std::string, std::string>> to_key_values(const NetworkConfig& cfg);

/// Shortest text that parses back to the same double.
std::string format_number(double v);

}  // namespace wpcn
