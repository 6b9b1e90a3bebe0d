#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wia/backbone.hpp"
#include "wia/fam.hpp"
#include "wia/wia.hpp"

namespace wia {

enum class TrainMode { full, wia_only, wia_star, fam_only, fam_star, baseline };

TrainMode parse_mode(const std::string& name);
std::string mode_name(TrainMode mode);

// Which pieces of the pipeline a mode engages.
inline bool mode_uses_wia(TrainMode m) { return m == TrainMode::full || m == TrainMode::wia_only; }
inline bool mode_uses_direct_noise(TrainMode m) { return m == TrainMode::wia_star; }
inline bool mode_uses_fam(TrainMode m) { return m == TrainMode::full || m == TrainMode::fam_only; }
inline bool mode_uses_fam_star(TrainMode m) { return m == TrainMode::fam_star; }
inline bool mode_has_phase_b(TrainMode m) { return mode_uses_fam(m) || mode_uses_fam_star(m); }

struct TrainConfig {
    std::uint64_t seed = 1234;
    TrainMode mode = TrainMode::full;
    int epochs = 200;
    int batch_size = 4;
    int crop = 64;
    double lr = 1e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.99;
    double lambda_fam = 0.01;
    double ema_momentum = 0.99;
    int checkpoint_every = 0;  // 0 -> final checkpoint only
    std::string data_dir;
    NoiseConfig noise;  // noise.seed == 0 -> derived from seed
    BackboneConfig backbone;
    EncoderConfig encoder;

    void validate() const;
    std::uint64_t noise_seed() const { return noise.seed != 0 ? noise.seed : seed; }

    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json& j);
};

TrainConfig load_train_config(const std::string& path);

// Applies a dotted-path override ("trainer-style" key=value). The value is
// parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& key, const std::string& value);

}  // namespace wia
