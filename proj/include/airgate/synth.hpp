#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgate/gesture.hpp"

namespace airgate {

enum class Observations { One, Many };

struct AttackConfig {
    double one_observation_fidelity = 0.4;
    double multi_observation_fidelity = 0.7;
};

struct SynthConfig {
    std::size_t n_users = 10;
    std::size_t samples_per_user_per_batch = 6;
    std::size_t n_batches = 1;
    /// Intra-user jitter, in the same units as separation.
    double noise_sigma = 0.2;
    /// Style drift per batch, as a fraction of the user's style spread.
    double drift_rate = 0.0;
    /// Fraction of the drift removed (0 = full drift).
    double drift_damping = 0.0;
    /// Inter-user style spread multiplier.
    double separation = 1.0;
    double fps = 100.0;
    std::vector<GestureType> gestures{kAllGestures.begin(), kAllGestures.end()};
    /// Nominal gesture durations in seconds.
    std::map<GestureType, double> durations = default_durations();
    std::string user_prefix = "u";
    AttackConfig attack;

    /// Throws UsageError on out-of-range values.
    void validate() const;
    nlohmann::ordered_json to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static SynthConfig from_json(const nlohmann::json& j);
    static std::map<GestureType, double> default_durations();
};

/// Number of scalar style parameters per gesture.
inline constexpr std::size_t kStyleParams = 61;

/// Everything that distinguishes one user's rendition of one gesture.
struct GestureStyle {
    GestureType gesture = GestureType::Swipe;
    /// Base polyline (mm, relative to the gesture centre) before the style field.
    std::vector<Vec3> shape;
    /// Style offsets in units of each parameter's natural scale.
    std::array<double, kStyleParams> params{};
    /// Pacing error of a mimicked performance: log duration factor and tempo
    /// warp, applied after the limits on the style's own tempo.
    std::array<double, 2> tempo_error{};
};

/// Whether parameter i describes the hand itself (geometry, habitual pose)
/// rather than the performed motion.
bool is_idiosyncratic(std::size_t param);

/// Per-sample variation, standard normal in parameter units.
using Jitter = std::array<double, kStyleParams>;

/// Portable 64-bit seed derived from the master seed and a label path.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& label);

/// Style of user `user` (0-based) for gesture g at batch (1-based), drift included.
GestureStyle user_style(const SynthConfig& config, std::uint64_t seed, std::size_t user, GestureType g,
                        std::size_t batch = 1);

/// Attack style: motion parameters and shape blended with weight f toward the
/// victim, hand parameters with weight f^8.
GestureStyle blend_styles(const GestureStyle& victim, const GestureStyle& attacker, double f);

Jitter draw_jitter(std::uint64_t seed);

/// Renders a sample; jitter is scaled by jitter_scale * noise_sigma.
RawSample render_sample(const SynthConfig& config, const GestureStyle& style, const Jitter& jitter,
                        double jitter_scale, const std::string& user_id, const std::string& sample_id,
                        int batch);

std::string user_id(const SynthConfig& config, std::size_t user);
std::string sample_id(const SynthConfig& config, std::size_t user, GestureType g, std::size_t batch,
                      std::size_t index);

/// Corpus ordered by user, gesture (config order), batch, sample index.
std::vector<RawSample> generate_corpus(const SynthConfig& config, std::uint64_t seed);

/// Attacker mimicking the victim's batch-1 rendition after observing it once or
/// repeatedly. attempt distinguishes repeated tries. At fidelity 1 the result is
/// the victim's noiseless sample; at 0 it is a genuine attacker sample. In
/// between, the attacker's pacing error scales with f(1-f).
RawSample generate_attack(const SynthConfig& config, std::uint64_t seed, std::size_t victim, std::size_t attacker,
                          GestureType g, std::size_t attempt, double fidelity);
RawSample generate_attack(const SynthConfig& config, std::uint64_t seed, std::size_t victim, std::size_t attacker,
                          GestureType g, std::size_t attempt, Observations obs);

}  // namespace airgate
