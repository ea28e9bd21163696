#include "airgate/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "airgate/error.hpp"
#include "airgate/parallel.hpp"
#include "airgate/sample_io.hpp"

namespace airgate {

namespace {

using std::numbers::pi;

// Parameter layout. Motion parameters come first.
constexpr std::size_t kPathModes = 0;  // 3 modes x (sin, cos) x 3 axes
constexpr std::size_t kOffset = 18;
constexpr std::size_t kAmplitude = 21;
constexpr std::size_t kTempoWarp = 22;
constexpr std::size_t kDuration = 23;
constexpr std::size_t kPoseMod = 24;
constexpr std::size_t kFirstIdiosyncratic = 27;
constexpr std::size_t kHabitualPose = 27;
constexpr std::size_t kGrabLevel = 30;
constexpr std::size_t kPinchLevel = 31;
constexpr std::size_t kPalmWidth = 32;
constexpr std::size_t kFingerLength = 33;
constexpr std::size_t kFingerWidth = 38;
constexpr std::size_t kFingerSpread = 43;  // thumb, middle, ring, pinky x 3 axes
constexpr std::size_t kWristOffset = 55;
constexpr std::size_t kArmOffset = 58;
static_assert(kArmOffset + 3 == kStyleParams);

constexpr std::size_t kModes = 3;

// Attacker pacing error at f = 0.5: log duration factor and tempo warp.
constexpr double kPaceSigma = 0.25;
constexpr double kWarpSigma = 0.12;

const std::array<double, kStyleParams>& units() {
    static const auto u = [] {
        std::array<double, kStyleParams> a{};
        for (std::size_t m = 0; m < 2 * kModes; ++m) {
            a[kPathModes + 3 * m + 0] = 6.0;
            a[kPathModes + 3 * m + 1] = 6.0;
            a[kPathModes + 3 * m + 2] = 3.0;
        }
        for (std::size_t i = 0; i < 3; ++i) {
            a[kOffset + i] = 10.0;
            a[kPoseMod + i] = 0.08;
            a[kHabitualPose + i] = 0.08;
            a[kWristOffset + i] = 8.0;
            a[kArmOffset + i] = 8.0;
        }
        a[kAmplitude] = 0.06;
        a[kTempoWarp] = 0.08;
        a[kDuration] = 0.03;
        a[kGrabLevel] = 0.06;
        a[kPinchLevel] = 0.06;
        a[kPalmWidth] = 4.0;
        for (std::size_t f = 0; f < 5; ++f) {
            a[kFingerLength + f] = 3.0;
            a[kFingerWidth + f] = 1.0;
        }
        for (std::size_t i = 0; i < 12; ++i) a[kFingerSpread + i] = 6.0;
        return a;
    }();
    return u;
}

// Inter-user spread per gesture: the short predefined motions leave less room
// for personal style than letters or freely drawn shapes.
double distinctiveness(GestureType g) {
    switch (g) {
        case GestureType::Swipe: return 0.35;
        case GestureType::Wave: return 0.45;
        case GestureType::Circle: return 0.4;
        case GestureType::Zoom: return 0.4;
        case GestureType::Grab: return 0.35;
        case GestureType::Abc: return 0.8;
        case GestureType::UserDefined: return 1.0;
        case GestureType::Sig: return 1.0;
    }
    return 1.0;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Box-Muller, so the stream does not depend on the standard library.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::array<double, kStyleParams> normals(std::uint64_t seed) {
    Rng rng(seed);
    std::array<double, kStyleParams> z{};
    for (double& v : z) v = rng.normal();
    return z;
}

std::string key(std::size_t user, GestureType g) { return std::to_string(user) + "/" + std::string(to_string(g)); }

std::vector<Vec3> random_polyline(std::uint64_t seed, std::size_t vertices) {
    Rng rng(seed);
    std::vector<Vec3> v;
    double heading = rng.uniform(0.0, 2.0 * pi);
    Vec3 p{0.0, 0.0, 0.0};
    v.push_back(p);
    for (std::size_t i = 1; i < vertices; ++i) {
        const double len = rng.uniform(40.0, 60.0);
        p = {p[0] + len * std::cos(heading), p[1] + len * std::sin(heading), rng.uniform(-5.0, 5.0)};
        v.push_back(p);
        const double turn = rng.uniform(70.0, 140.0) * pi / 180.0;
        heading += rng.uniform() < 0.5 ? turn : -turn;
    }
    Vec3 c{};
    for (const auto& q : v) {
        for (int d = 0; d < 3; ++d) c[d] += q[d] / static_cast<double>(v.size());
    }
    for (auto& q : v) {
        for (int d = 0; d < 3; ++d) q[d] -= c[d];
    }
    return v;
}

std::vector<Vec3> base_shape(GestureType g, std::uint64_t seed) {
    std::vector<Vec3> v;
    switch (g) {
        case GestureType::Swipe:
            v = {{-80, 0, 0}, {80, 0, 0}};
            break;
        case GestureType::Wave:
            for (int k = 0; k <= 48; ++k) {
                const double u = k / 48.0;
                v.push_back({-60.0 + 120.0 * u, 28.0 * std::sin(3.0 * pi * u), 0.0});
            }
            break;
        case GestureType::Circle:
            for (int k = 0; k <= 64; ++k) {
                const double a = 2.0 * pi * k / 64.0;
                v.push_back({50.0 * std::cos(a), 50.0 * std::sin(a), 0.0});
            }
            break;
        case GestureType::Zoom:
            v = {{0, 0, 0}, {35, 35, 0}, {0, 0, 0}};
            break;
        case GestureType::Grab:
            for (int k = 0; k <= 8; ++k) {
                const double a = 0.5 * pi * k / 8.0;
                v.push_back({0.0, 40.0 * std::cos(a), -40.0 * std::sin(a)});
            }
            break;
        case GestureType::Abc:
            v = {{-130, -30, 0}, {-105, 30, 0}, {-80, -30, 0}, {-80, 35, 0}, {-40, 5, 0},
                 {-80, -25, 0},  {-20, -30, 0}, {0, 30, 0},    {30, -28, 0}, {60, 30, 0}};
            break;
        case GestureType::UserDefined:
            v = random_polyline(seed, 11);
            break;
        case GestureType::Sig:
            v = random_polyline(seed, 12);
            break;
    }
    return v;
}

// Splits segments so the smooth style field can bend them.
std::vector<Vec3> densify(const std::vector<Vec3>& v, double max_len) {
    std::vector<Vec3> out{v.front()};
    for (std::size_t i = 1; i < v.size(); ++i) {
        const Vec3 d{v[i][0] - v[i - 1][0], v[i][1] - v[i - 1][1], v[i][2] - v[i - 1][2]};
        const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / max_len)));
        for (std::size_t k = 1; k <= pieces; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(pieces);
            out.push_back({v[i - 1][0] + t * d[0], v[i - 1][1] + t * d[1], v[i - 1][2] + t * d[2]});
        }
    }
    return out;
}

std::vector<double> arc_fractions(const std::vector<Vec3>& v) {
    std::vector<double> s(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) {
        s[i] = s[i - 1] + std::hypot(v[i][0] - v[i - 1][0], v[i][1] - v[i - 1][1], v[i][2] - v[i - 1][2]);
    }
    if (s.back() > 0) {
        for (double& x : s) x /= s.back();
    }
    return s;
}

double min_jerk(double t) { return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

const std::array<Vec3, 4> kBaseSpread = {Vec3{-45, -30, -10}, Vec3{20, 3, 0}, Vec3{38, -5, 3}, Vec3{55, -18, 8}};
const std::array<double, 5> kBaseLength = {50, 56, 60, 57, 45};
const std::array<double, 5> kBaseWidth = {20, 18, 17, 16, 14};
const Vec3 kCenter{0.0, 200.0, 0.0};
const Vec3 kPalmFromIndex{-5.0, -60.0, 35.0};
const Vec3 kWristFromPalm{0.0, -25.0, 50.0};
const Vec3 kArmFromWrist{0.0, -80.0, 170.0};

void fill_kinematics(std::vector<RawFrame>& frames, double fps) {
    const std::size_t n = frames.size();
    for (std::size_t f = 0; f < 5; ++f) {
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t a = t == 0 ? 0 : t - 1;
            const std::size_t b = t == 0 ? 1 : t;
            frames[t].fingers[f].tip_velocity =
                scale(sub(frames[b].fingers[f].tip_pos, frames[a].fingers[f].tip_pos), fps);
        }
        // Direction of travel; stationary frames hold the previous direction.
        Vec3 last{0.0, 0.0, -1.0};
        for (std::size_t t = n; t-- > 0;) {
            const Vec3& v = frames[t].fingers[f].tip_velocity;
            const double s = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (s > 0) last = scale(v, 1.0 / s);
        }
        for (std::size_t t = 0; t < n; ++t) {
            const Vec3& v = frames[t].fingers[f].tip_velocity;
            const double s = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (s > 0) last = scale(v, 1.0 / s);
            frames[t].fingers[f].tip_direction = last;
        }
    }
}

}  // namespace

std::map<GestureType, double> SynthConfig::default_durations() {
    return {{GestureType::Swipe, 0.9}, {GestureType::Wave, 1.3},        {GestureType::Circle, 1.4},
            {GestureType::Zoom, 1.0},  {GestureType::Grab, 1.1},        {GestureType::Abc, 2.8},
            {GestureType::UserDefined, 2.8}, {GestureType::Sig, 2.8}};
}

void SynthConfig::validate() const {
    auto fail = [](const std::string& what) { throw UsageError("synth config: " + what); };
    if (n_users < 1) fail("n_users must be >= 1");
    if (samples_per_user_per_batch < 1) fail("samples_per_user_per_batch must be >= 1");
    if (n_batches < 1 || n_batches > 99) fail("n_batches must be in 1..99");
    if (!(noise_sigma >= 0) || !(drift_rate >= 0) || !(separation >= 0)) {
        fail("noise_sigma, drift_rate and separation must be non-negative");
    }
    if (!(drift_damping >= 0 && drift_damping <= 1)) fail("drift_damping must be in [0,1]");
    if (!(fps > 0)) fail("fps must be positive");
    if (gestures.empty()) fail("gestures must not be empty");
    for (GestureType g : gestures) {
        const auto it = durations.find(g);
        if (it == durations.end() || !(it->second > 0)) fail("missing or non-positive duration");
    }
    const double f1 = attack.one_observation_fidelity, fm = attack.multi_observation_fidelity;
    if (!(f1 >= 0 && f1 <= 1 && fm >= 0 && fm <= 1)) fail("fidelities must be in [0,1]");
    if (!(fm > f1)) fail("multi-observation fidelity must exceed one-observation fidelity");
    if (user_prefix.empty()) fail("user_prefix must not be empty");
}

nlohmann::ordered_json SynthConfig::to_json() const {
    nlohmann::ordered_json j;
    j["n_users"] = n_users;
    j["samples_per_user_per_batch"] = samples_per_user_per_batch;
    j["n_batches"] = n_batches;
    j["noise_sigma"] = noise_sigma;
    j["drift_rate"] = drift_rate;
    j["drift_damping"] = drift_damping;
    j["separation"] = separation;
    j["fps"] = fps;
    nlohmann::ordered_json gs = nlohmann::ordered_json::array();
    for (GestureType g : gestures) gs.push_back(std::string(to_string(g)));
    j["gestures"] = gs;
    nlohmann::ordered_json ds = nlohmann::ordered_json::object();
    for (GestureType g : kAllGestures) {
        if (durations.count(g)) ds[std::string(to_string(g))] = durations.at(g);
    }
    j["durations"] = ds;
    j["user_prefix"] = user_prefix;
    j["attack"] = {{"one_observation_fidelity", attack.one_observation_fidelity},
                   {"multi_observation_fidelity", attack.multi_observation_fidelity}};
    return j;
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw UsageError("synth config must be a JSON object");
    SynthConfig c;
    try {
        for (const auto& [k, v] : j.items()) {
            if (k == "n_users") c.n_users = v.get<std::size_t>();
            else if (k == "samples_per_user_per_batch") c.samples_per_user_per_batch = v.get<std::size_t>();
            else if (k == "n_batches") c.n_batches = v.get<std::size_t>();
            else if (k == "noise_sigma") c.noise_sigma = v.get<double>();
            else if (k == "drift_rate") c.drift_rate = v.get<double>();
            else if (k == "drift_damping") c.drift_damping = v.get<double>();
            else if (k == "separation") c.separation = v.get<double>();
            else if (k == "fps") c.fps = v.get<double>();
            else if (k == "user_prefix") c.user_prefix = v.get<std::string>();
            else if (k == "gestures") {
                c.gestures.clear();
                for (const auto& name : v) {
                    const auto g = parse_gesture(name.get<std::string>());
                    if (!g) throw UsageError("synth config: unknown gesture '" + name.get<std::string>() + "'");
                    c.gestures.push_back(*g);
                }
            } else if (k == "durations") {
                for (const auto& [name, d] : v.items()) {
                    const auto g = parse_gesture(name);
                    if (!g) throw UsageError("synth config: unknown gesture '" + name + "'");
                    c.durations[*g] = d.get<double>();
                }
            } else if (k == "attack") {
                for (const auto& [name, f] : v.items()) {
                    if (name == "one_observation_fidelity") c.attack.one_observation_fidelity = f.get<double>();
                    else if (name == "multi_observation_fidelity") c.attack.multi_observation_fidelity = f.get<double>();
                    else throw UsageError("synth config: unknown attack key '" + name + "'");
                }
            } else {
                throw UsageError("synth config: unknown key '" + k + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("synth config: ") + e.what());
    }
    c.validate();
    return c;
}

bool is_idiosyncratic(std::size_t param) { return param >= kFirstIdiosyncratic; }

std::uint64_t derive_seed(std::uint64_t seed, const std::string& label) {
    const std::string hex = sha256_hex(std::to_string(seed) + "|" + label);
    return std::stoull(hex.substr(0, 16), nullptr, 16);
}

GestureStyle user_style(const SynthConfig& config, std::uint64_t seed, std::size_t user, GestureType g,
                        std::size_t batch) {
    GestureStyle s;
    s.gesture = g;
    const double spread = config.separation * distinctiveness(g);
    const auto z = normals(derive_seed(seed, "style/" + key(user, g)));
    for (std::size_t i = 0; i < kStyleParams; ++i) s.params[i] = spread * z[i];
    if (batch > 1 && config.drift_rate > 0) {
        const auto dir = normals(derive_seed(seed, "drift/" + key(user, g)));
        const double amount =
            config.drift_rate * static_cast<double>(batch - 1) * (1.0 - config.drift_damping) * spread;
        for (std::size_t i = 0; i < kStyleParams; ++i) s.params[i] += amount * dir[i];
    }
    s.shape = base_shape(g, derive_seed(seed, "shape/shared/" + std::string(to_string(g))));
    if (g == GestureType::UserDefined || g == GestureType::Sig) {
        // Freely chosen shapes: each user draws their own polyline.
        const auto own = base_shape(g, derive_seed(seed, "shape/" + key(user, g)));
        const double t = std::clamp(spread, 0.0, 1.0);
        for (std::size_t v = 0; v < s.shape.size(); ++v) {
            for (int d = 0; d < 3; ++d) s.shape[v][d] += t * (own[v][d] - s.shape[v][d]);
        }
    }
    return s;
}

GestureStyle blend_styles(const GestureStyle& victim, const GestureStyle& attacker, double f) {
    if (victim.gesture != attacker.gesture || victim.shape.size() != attacker.shape.size()) {
        throw UsageError("blend_styles: styles describe different gestures");
    }
    GestureStyle s = attacker;
    const double fh = std::pow(f, 8.0);
    for (std::size_t i = 0; i < kStyleParams; ++i) {
        const double w = is_idiosyncratic(i) ? fh : f;
        s.params[i] = w * victim.params[i] + (1.0 - w) * attacker.params[i];
    }
    for (std::size_t v = 0; v < s.shape.size(); ++v) {
        for (int d = 0; d < 3; ++d) s.shape[v][d] = f * victim.shape[v][d] + (1.0 - f) * attacker.shape[v][d];
    }
    return s;
}

Jitter draw_jitter(std::uint64_t seed) { return normals(seed); }

RawSample render_sample(const SynthConfig& config, const GestureStyle& style, const Jitter& jitter,
                        double jitter_scale, const std::string& user_id, const std::string& sample_id, int batch) {
    const auto& unit = units();
    std::array<double, kStyleParams> p{};
    for (std::size_t i = 0; i < kStyleParams; ++i) {
        p[i] = (style.params[i] + jitter_scale * config.noise_sigma * jitter[i]) * unit[i];
    }
    const GestureType g = style.gesture;

    const double tempo = std::clamp(std::clamp(p[kTempoWarp], -0.25, 0.25) + style.tempo_error[1], -0.3, 0.3);
    const double stretch = std::clamp(std::exp(p[kDuration]), 0.97, 1.12) * std::exp(style.tempo_error[0]);
    const auto n = std::max<std::size_t>(
        5, static_cast<std::size_t>(std::lround(config.durations.at(g) * stretch * config.fps)));

    // Displaced path.
    const auto dense = densify(style.shape, 8.0);
    const auto u = arc_fractions(dense);
    std::vector<Vec3> path(dense.size());
    for (std::size_t k = 0; k < dense.size(); ++k) {
        Vec3 q = scale(dense[k], 1.0 + p[kAmplitude]);
        for (std::size_t m = 0; m < kModes; ++m) {
            const double sn = std::sin((m + 1) * pi * u[k]), cs = std::cos((m + 1) * pi * u[k]);
            for (int d = 0; d < 3; ++d) {
                q[d] += p[kPathModes + 3 * (2 * m) + d] * sn + p[kPathModes + 3 * (2 * m + 1) + d] * cs;
            }
        }
        path[k] = add(add(q, kCenter), {p[kOffset], p[kOffset + 1], p[kOffset + 2]});
    }
    std::vector<double> cum(path.size(), 0.0);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Vec3 d = sub(path[k], path[k - 1]);
        cum[k] = cum[k - 1] + std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    }
    auto point_at = [&](double s) {
        const auto it = std::upper_bound(cum.begin(), cum.end(), s);
        if (it == cum.end()) return path.back();
        const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(it - cum.begin()));
        const double len = cum[k] - cum[k - 1];
        const double t = len > 0 ? (s - cum[k - 1]) / len : 0.0;
        return add(path[k - 1], scale(sub(path[k], path[k - 1]), t));
    };

    std::array<Vec3, 4> spread;
    for (std::size_t f = 0; f < 4; ++f) {
        spread[f] = add(kBaseSpread[f], {p[kFingerSpread + 3 * f], p[kFingerSpread + 3 * f + 1],
                                         p[kFingerSpread + 3 * f + 2]});
    }
    const double grab_level = std::clamp(0.1 + p[kGrabLevel], 0.0, 1.0);
    const double pinch_level = std::clamp(0.05 + p[kPinchLevel], 0.0, 1.0);

    RawSample sample;
    sample.sample_id = sample_id;
    sample.user_id = user_id;
    sample.gesture = g;
    sample.batch = batch;
    sample.frames.resize(n);
    const Vec3 start = point_at(0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const double tau = static_cast<double>(t) / static_cast<double>(n - 1);
        const double phase = std::clamp(tau + tempo * std::sin(pi * tau), 0.0, 1.0);
        const double progress = min_jerk(phase);
        RawFrame& fr = sample.frames[t];
        fr.timestamp = static_cast<double>(t) / config.fps;
        const Vec3 index = point_at(progress * cum.back());

        fr.pitch = 0.15 + p[kHabitualPose] + (0.1 + p[kPoseMod]) * std::sin(2.0 * pi * phase);
        fr.yaw = p[kHabitualPose + 1] + (0.1 + p[kPoseMod + 1]) * (2.0 * phase - 1.0);
        fr.roll = -0.1 + p[kHabitualPose + 2] + (0.1 + p[kPoseMod + 2]) * std::cos(pi * phase);
        fr.grab_strength = grab_level;
        fr.pinch_strength = pinch_level;
        if (g == GestureType::Grab) fr.grab_strength = grab_level + (0.95 - grab_level) * progress;
        if (g == GestureType::Zoom) fr.pinch_strength = 0.85 + (pinch_level - 0.85) * std::sin(pi * phase);
        fr.grab_strength = std::clamp(fr.grab_strength, 0.0, 1.0);
        fr.pinch_strength = std::clamp(fr.pinch_strength, 0.0, 1.0);
        fr.palm_width = 85.0 + p[kPalmWidth];

        fr.fingers[kIndexFinger].tip_pos = index;
        const double close = g == GestureType::Grab ? 1.0 - 0.5 * progress : 1.0;
        for (std::size_t f = 0, s = 0; f < 5; ++f) {
            fr.fingers[f].length = kBaseLength[f] + p[kFingerLength + f];
            fr.fingers[f].width = kBaseWidth[f] + p[kFingerWidth + f];
            if (f == kIndexFinger) continue;
            fr.fingers[f].tip_pos = add(index, scale(spread[s], close));
            if (g == GestureType::Zoom && f == kThumb) {
                // The thumb opens away from the index finger.
                fr.fingers[f].tip_pos = sub(add(start, spread[s]), sub(index, start));
            }
            ++s;
        }
        const Vec3 palm_anchor = g == GestureType::Grab ? start : index;
        fr.palm_pos = add(palm_anchor, kPalmFromIndex);
        fr.wrist_pos = add(add(fr.palm_pos, kWristFromPalm), {p[kWristOffset], p[kWristOffset + 1], p[kWristOffset + 2]});
        fr.arm_pos = add(add(fr.wrist_pos, kArmFromWrist), {p[kArmOffset], p[kArmOffset + 1], p[kArmOffset + 2]});
        fr.hand_type = HandType::Right;
        fr.gesture_flags[0] = g == GestureType::Circle && tau >= 0.15 && tau <= 0.85;
    }
    fill_kinematics(sample.frames, config.fps);
    if (g == GestureType::Swipe) {
        for (RawFrame& fr : sample.frames) {
            const Vec3& v = fr.fingers[kIndexFinger].tip_velocity;
            fr.gesture_flags[1] = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) > 300.0;
        }
    }
    return sample;
}

std::string user_id(const SynthConfig& config, std::size_t user) {
    char buf[16];
    std::snprintf(buf, sizeof buf, config.n_users > 99 ? "%03zu" : "%02zu", user + 1);
    return config.user_prefix + buf;
}

std::string sample_id(const SynthConfig& config, std::size_t user, GestureType g, std::size_t batch,
                      std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "-b%02zu-s%03zu", batch, index + 1);
    return user_id(config, user) + "-" + std::string(to_string(g)) + buf;
}

std::vector<RawSample> generate_corpus(const SynthConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t per_user = config.gestures.size() * config.n_batches * config.samples_per_user_per_batch;
    std::vector<RawSample> corpus(config.n_users * per_user);
    parallel_for(config.n_users, [&](std::size_t u) {
        std::size_t slot = u * per_user;
        for (GestureType g : config.gestures) {
            for (std::size_t b = 1; b <= config.n_batches; ++b) {
                const GestureStyle style = user_style(config, seed, u, g, b);
                for (std::size_t s = 0; s < config.samples_per_user_per_batch; ++s) {
                    const std::string id = sample_id(config, u, g, b, s);
                    const Jitter jitter = draw_jitter(derive_seed(seed, "jitter/" + id));
                    corpus[slot++] = render_sample(config, style, jitter, 1.0, user_id(config, u), id,
                                                   static_cast<int>(b));
                }
            }
        }
    });
    return corpus;
}

RawSample generate_attack(const SynthConfig& config, std::uint64_t seed, std::size_t victim, std::size_t attacker,
                          GestureType g, std::size_t attempt, double fidelity) {
    if (!(fidelity >= 0 && fidelity <= 1)) throw UsageError("mimic fidelity must be in [0,1]");
    const GestureStyle v = user_style(config, seed, victim, g, 1);
    const GestureStyle a = user_style(config, seed, attacker, g, 1);
    char buf[64];
    std::snprintf(buf, sizeof buf, "-a%03zu", attempt + 1);
    const std::string tag = user_id(config, attacker) + "-on-" + user_id(config, victim) + "-" +
                            std::string(to_string(g)) + buf;
    // The jitter draw is shared by every fidelity, so attacks differ only by skill.
    const Jitter jitter = draw_jitter(derive_seed(seed, "attack/" + tag));
    GestureStyle mimic = blend_styles(v, a, fidelity);
    const auto pace = normals(derive_seed(seed, "pace/" + key(attacker, g)));
    const double miss = 4.0 * fidelity * (1.0 - fidelity);
    mimic.tempo_error = {miss * kPaceSigma * pace[0], miss * kWarpSigma * pace[1]};
    char fid[32];
    std::snprintf(fid, sizeof fid, "-f%.3f", fidelity);
    // Motor noise is no easier to copy than the hand itself.
    return render_sample(config, mimic, jitter, 1.0 - std::pow(fidelity, 8.0), user_id(config, attacker),
                         "atk-" + tag + fid, 1);
}

RawSample generate_attack(const SynthConfig& config, std::uint64_t seed, std::size_t victim, std::size_t attacker,
                          GestureType g, std::size_t attempt, Observations obs) {
    const double f = obs == Observations::One ? config.attack.one_observation_fidelity
                                              : config.attack.multi_observation_fidelity;
    return generate_attack(config, seed, victim, attacker, g, attempt, f);
}

}  // namespace airgate
