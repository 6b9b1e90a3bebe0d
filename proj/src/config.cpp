#include "wia/config.hpp"

#include <fstream>
#include <set>

#include "wia/error.hpp"

namespace wia {

namespace {

using nlohmann::json;

void require_known_keys(const json& j, const std::set<std::string>& known, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw Error(ErrorKind::ConfigError,
                        std::string("unknown config key '") + it.key() + "' in " + where);
        }
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ConfigError,
                        std::string("bad value for config key '") + key + "': " + e.what());
        }
    }
}

}  // namespace

TrainMode parse_mode(const std::string& name) {
    if (name == "full") return TrainMode::full;
    if (name == "wia_only") return TrainMode::wia_only;
    if (name == "wia_star") return TrainMode::wia_star;
    if (name == "fam_only") return TrainMode::fam_only;
    if (name == "fam_star") return TrainMode::fam_star;
    if (name == "baseline") return TrainMode::baseline;
    throw Error(ErrorKind::ConfigError, "unknown mode '" + name +
                                            "' (expected full|wia_only|wia_star|fam_only|"
                                            "fam_star|baseline)");
}

std::string mode_name(TrainMode mode) {
    switch (mode) {
        case TrainMode::full: return "full";
        case TrainMode::wia_only: return "wia_only";
        case TrainMode::wia_star: return "wia_star";
        case TrainMode::fam_only: return "fam_only";
        case TrainMode::fam_star: return "fam_star";
        case TrainMode::baseline: return "baseline";
    }
    return "full";
}

void TrainConfig::validate() const {
    if (epochs < 1) throw Error(ErrorKind::ConfigError, "epochs must be >= 1");
    if (batch_size < 1) throw Error(ErrorKind::ConfigError, "batch_size must be >= 1");
    if (lr <= 0.0) throw Error(ErrorKind::ConfigError, "lr must be positive");
    if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 || adam_beta2 >= 1.0) {
        throw Error(ErrorKind::ConfigError, "adam betas must lie in [0, 1)");
    }
    if (lambda_fam < 0.0) throw Error(ErrorKind::ConfigError, "lambda_fam must be >= 0");
    if (ema_momentum < 0.0 || ema_momentum > 1.0) {
        throw Error(ErrorKind::ConfigError, "ema_momentum must lie in [0, 1]");
    }
    if (checkpoint_every < 0) throw Error(ErrorKind::ConfigError, "checkpoint_every must be >= 0");
    backbone.validate();
    encoder.validate();
    if (mode_uses_wia(mode) || mode_uses_direct_noise(mode)) noise.validate();

    if (crop < 2 || crop % 2 != 0) throw Error(ErrorKind::ConfigError, "crop must be even and >= 2");
    if (crop % backbone.stride_total() != 0) {
        throw Error(ErrorKind::ConfigError, "crop must be a multiple of 2^n_downsample = " +
                                                std::to_string(backbone.stride_total()));
    }
    if (mode_has_phase_b(mode) || lambda_fam > 0.0) {
        // hf plane is crop/2; encoder scales sit at strides 1/2/4 on top of it
        // and every scale must split into patch_grid cells.
        const int need = 8 * encoder.patch_grid;
        if (crop % need != 0) {
            throw Error(ErrorKind::ConfigError,
                        "crop must be a multiple of 8*patch_grid = " + std::to_string(need) +
                            " for frequency-loss modes");
        }
    }
}

nlohmann::json TrainConfig::to_json() const {
    json j;
    j["seed"] = seed;
    j["mode"] = mode_name(mode);
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["crop"] = crop;
    j["lr"] = lr;
    j["adam_beta1"] = adam_beta1;
    j["adam_beta2"] = adam_beta2;
    j["lambda_fam"] = lambda_fam;
    j["ema_momentum"] = ema_momentum;
    j["checkpoint_every"] = checkpoint_every;
    j["data_dir"] = data_dir;
    j["noise"] = {{"sigma_ll", noise.sigma_ll}, {"sigma_lh", noise.sigma_lh},
                  {"sigma_hl", noise.sigma_hl}, {"sigma_hh", noise.sigma_hh},
                  {"seed", noise.seed}};
    j["backbone"] = {{"base_channels", backbone.base_channels},
                     {"n_res_blocks", backbone.n_res_blocks},
                     {"n_downsample", backbone.n_downsample},
                     {"tanh_output", backbone.tanh_output}};
    j["encoder"] = {{"stage_channels", encoder.stage_channels},
                    {"patch_grid", encoder.patch_grid},
                    {"top_k", encoder.top_k},
                    {"mlp_hidden", encoder.mlp_hidden}};
    return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config root must be an object");
    require_known_keys(j, {"seed", "mode", "epochs", "batch_size", "crop", "lr", "adam_beta1",
                           "adam_beta2", "lambda_fam", "ema_momentum", "checkpoint_every",
                           "data_dir", "noise", "backbone", "encoder"},
                       "config root");
    TrainConfig c;
    get_if(j, "seed", c.seed);
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    get_if(j, "epochs", c.epochs);
    get_if(j, "batch_size", c.batch_size);
    get_if(j, "crop", c.crop);
    get_if(j, "lr", c.lr);
    get_if(j, "adam_beta1", c.adam_beta1);
    get_if(j, "adam_beta2", c.adam_beta2);
    get_if(j, "lambda_fam", c.lambda_fam);
    get_if(j, "ema_momentum", c.ema_momentum);
    get_if(j, "checkpoint_every", c.checkpoint_every);
    get_if(j, "data_dir", c.data_dir);
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        require_known_keys(n, {"sigma_ll", "sigma_lh", "sigma_hl", "sigma_hh", "seed"}, "noise");
        get_if(n, "sigma_ll", c.noise.sigma_ll);
        get_if(n, "sigma_lh", c.noise.sigma_lh);
        get_if(n, "sigma_hl", c.noise.sigma_hl);
        get_if(n, "sigma_hh", c.noise.sigma_hh);
        get_if(n, "seed", c.noise.seed);
    }
    if (j.contains("backbone")) {
        const json& b = j.at("backbone");
        require_known_keys(b, {"base_channels", "n_res_blocks", "n_downsample", "tanh_output"},
                           "backbone");
        get_if(b, "base_channels", c.backbone.base_channels);
        get_if(b, "n_res_blocks", c.backbone.n_res_blocks);
        get_if(b, "n_downsample", c.backbone.n_downsample);
        get_if(b, "tanh_output", c.backbone.tanh_output);
    }
    if (j.contains("encoder")) {
        const json& e = j.at("encoder");
        require_known_keys(e, {"stage_channels", "patch_grid", "top_k", "mlp_hidden"}, "encoder");
        get_if(e, "stage_channels", c.encoder.stage_channels);
        get_if(e, "patch_grid", c.encoder.patch_grid);
        get_if(e, "top_k", c.encoder.top_k);
        get_if(e, "mlp_hidden", c.encoder.mlp_hidden);
    }
    return c;
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ConfigError, "config parse failure in " + path + ": " + e.what());
    }
    return TrainConfig::from_json(j);
}

void apply_override(nlohmann::json& j, const std::string& key, const std::string& value) {
    if (key.empty()) throw Error(ErrorKind::ConfigError, "empty override key");
    nlohmann::json* cur = &j;
    size_t start = 0;
    while (true) {
        const size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) throw Error(ErrorKind::ConfigError, "bad override key: " + key);
        if (dot == std::string::npos) {
            nlohmann::json parsed;
            try {
                parsed = nlohmann::json::parse(value);
            } catch (const nlohmann::json::exception&) {
                parsed = value;  // bare strings (e.g. mode=full) arrive unquoted
            }
            (*cur)[part] = parsed;
            return;
        }
        if (!cur->contains(part) || !(*cur)[part].is_object()) (*cur)[part] = nlohmann::json::object();
        cur = &(*cur)[part];
        start = dot + 1;
    }
}

}  // namespace wia
