#include "wpcn/config.hpp"

#include "wpcn/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <system_error>

namespace wpcn {

namespace {

using DoubleField = double NetworkConfig::*;

struct DoubleEntry {
    std::string_view key;
    DoubleField field;
};

constexpr std::array<DoubleEntry, 12> kDoubleFields{{
    {"dist_ps_ap", &NetworkConfig::dist_ps_ap},
    {"wet_radius", &NetworkConfig::wet_radius},
    {"ps_power", &NetworkConfig::ps_power},
    {"noise_power_dbm", &NetworkConfig::noise_power_dbm},
    {"interference_power_dbm", &NetworkConfig::interference_power_dbm},
    {"path_loss_ref", &NetworkConfig::path_loss_ref},
    {"ref_distance", &NetworkConfig::ref_distance},
    {"path_loss_exp", &NetworkConfig::path_loss_exp},
    {"energy_efficiency", &NetworkConfig::energy_efficiency},
    {"tau0", &NetworkConfig::tau0},
    {"fading_gain_wet", &NetworkConfig::fading_gain_wet},
    {"fading_gain_wit", &NetworkConfig::fading_gain_wit},
}};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw InvalidConfig("config field '" + std::string(key) + "': not a finite number: '" +
                            std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidConfig("config field '" + std::string(key) + "': not an integer: '" +
                            std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "on") return true;
    if (text == "false" || text == "0" || text == "off") return false;
    throw InvalidConfig("config field '" + std::string(key) + "': not a boolean: '" +
                        std::string(text) + "'");
}

void require(bool ok, const char* what) {
    if (!ok) throw InvalidConfig(what);
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void validate(const NetworkConfig& cfg) {
    require(cfg.n_users >= 1, "n_users must be at least 1");
    require(cfg.wet_radius > 0.0, "wet_radius must be positive");
    require(cfg.dist_ps_ap >= 2.0 * cfg.wet_radius, "dist_ps_ap must be at least 2 * wet_radius");
    require(cfg.ps_power > 0.0, "ps_power must be positive");
    require(cfg.path_loss_ref > 0.0, "path_loss_ref must be positive");
    require(cfg.ref_distance > 0.0, "ref_distance must be positive");
    require(cfg.path_loss_exp > 2.0, "path_loss_exp must exceed 2");
    require(cfg.energy_efficiency > 0.0 && cfg.energy_efficiency <= 1.0,
            "energy_efficiency must lie in (0, 1]");
    require(cfg.tau0 >= 0.0 && cfg.tau0 < 1.0, "tau0 must lie in [0, 1)");
    require(cfg.fading_gain_wet > 0.0, "fading_gain_wet must be positive");
    require(cfg.fading_gain_wit > 0.0, "fading_gain_wit must be positive");
    require(std::isfinite(cfg.noise_power_dbm), "noise_power_dbm must be finite");
    require(std::isfinite(cfg.interference_power_dbm), "interference_power_dbm must be finite");
    require(std::isfinite(cfg.inter_user_gain_db), "inter_user_gain_db must be finite");
}

DerivedConstants derive_constants(const NetworkConfig& cfg) {
    validate(cfg);
    DerivedConstants dc;
    dc.noise_power_w = dbm_to_watts(cfg.noise_power_dbm);
    dc.interference_power_w =
        cfg.interference_convention == InterferenceConvention::ReceivedPower
            ? dbm_to_watts(cfg.interference_power_dbm)
            : cfg.ps_power * std::pow(10.0, cfg.interference_power_dbm / 10.0);
    dc.a = cfg.energy_efficiency * cfg.ps_power * cfg.path_loss_ref * cfg.path_loss_ref *
           std::pow(cfg.ref_distance, 2.0 * cfg.path_loss_exp) * cfg.fading_gain_wet *
           cfg.fading_gain_wit / dc.noise_power_w;
    dc.b = 1.0 + dc.interference_power_w / dc.noise_power_w;
    const double n = static_cast<double>(cfg.n_users);
    dc.kappa = n * cfg.tau0 / (1.0 - cfg.tau0);
    dc.tau_n = (1.0 - cfg.tau0) / n;
    return dc;
}

std::string_view to_string(InterferenceConvention c) {
    return c == InterferenceConvention::ReceivedPower ? "received_power" : "channel_gain";
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k{"n_users"};
        for (const auto& e : kDoubleFields) k.emplace_back(e.key);
        k.emplace_back("interference_convention");
        k.emplace_back("inter_user_interference");
        k.emplace_back("inter_user_gain_db");
        return k;
    }();
    return keys;
}

void set_field(NetworkConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "n_users") {
        cfg.n_users = parse_int(key, value);
        return;
    }
    for (const auto& e : kDoubleFields) {
        if (e.key == key) {
            cfg.*e.field = parse_double(key, value);
            return;
        }
    }
    if (key == "interference_convention") {
        if (value == "received_power") {
            cfg.interference_convention = InterferenceConvention::ReceivedPower;
        } else if (value == "channel_gain") {
            cfg.interference_convention = InterferenceConvention::ChannelGain;
        } else {
            throw InvalidConfig("interference_convention must be received_power or channel_gain");
        }
        return;
    }
    if (key == "inter_user_interference") {
        cfg.inter_user_interference = parse_bool(key, value);
        return;
    }
    if (key == "inter_user_gain_db") {
        cfg.inter_user_gain_db = parse_double(key, value);
        return;
    }
    throw InvalidConfig("unknown config field '" + std::string(key) + "'");
}

NetworkConfig parse_config(std::istream& in, NetworkConfig base) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidConfig("config line " + std::to_string(line_no) + ": expected key = value");
        }
        set_field(base, trim(view.substr(0, eq)), view.substr(eq + 1));
    }
    return base;
}

NetworkConfig load_config(const std::filesystem::path& path, NetworkConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    return parse_config(in, std::move(base));
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

std::vector<std::pair<std::string, std::string>> to_key_values(const NetworkConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("n_users", std::to_string(cfg.n_users));
    for (const auto& e : kDoubleFields) kv.emplace_back(std::string(e.key), format_number(cfg.*e.field));
    kv.emplace_back("interference_convention", std::string(to_string(cfg.interference_convention)));
    kv.emplace_back("inter_user_interference", cfg.inter_user_interference ? "true" : "false");
    kv.emplace_back("inter_user_gain_db", format_number(cfg.inter_user_gain_db));
    return kv;
}

}  // namespace wpcn
