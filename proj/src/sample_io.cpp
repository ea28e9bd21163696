#include "airgate/sample_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "airgate/error.hpp"

namespace airgate {

namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vec3& v) { return ojson::array({v[0], v[1], v[2]}); }

Vec3 vec_from(const nlohmann::json& j, const char* key) {
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 3) throw DataError(std::string("field '") + key + "' must be a 3-element array");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

ojson header_json(const ojson& metadata) {
    ojson h;
    h["format"] = kSampleFormat;
    h["version"] = kSampleFormatVersion;
    h["units"] = ojson{{"position", "mm"}, {"angle", "rad"}};
    if (!metadata.is_null()) h["metadata"] = metadata;
    return h;
}

void check_header(const nlohmann::json& h) {
    if (!h.is_object() || h.value("format", "") != kSampleFormat) {
        throw DataError("line 1: missing airgate-samples header");
    }
    if (h.value("version", 0) != kSampleFormatVersion) {
        throw DataError("line 1: unsupported sample format version");
    }
    const auto units = h.value("units", nlohmann::json::object());
    if (units.value("position", "") != "mm" || units.value("angle", "") != "rad") {
        throw DataError("line 1: units must be position=mm, angle=rad");
    }
}

void append_fixed(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e,", v == 0.0 ? 0.0 : v);
    out += buf;
}

}  // namespace

ojson sample_to_json(const RawSample& s) {
    ojson j;
    j["sample_id"] = s.sample_id;
    j["user_id"] = s.user_id;
    j["gesture"] = std::string(to_string(s.gesture));
    j["batch"] = s.batch;
    ojson frames = ojson::array();
    for (const RawFrame& f : s.frames) {
        ojson fj;
        fj["timestamp"] = f.timestamp;
        fj["grab_strength"] = f.grab_strength;
        fj["pinch_strength"] = f.pinch_strength;
        fj["pitch"] = f.pitch;
        fj["yaw"] = f.yaw;
        fj["roll"] = f.roll;
        fj["palm_width"] = f.palm_width;
        fj["palm_pos"] = vec_json(f.palm_pos);
        fj["arm_pos"] = vec_json(f.arm_pos);
        fj["wrist_pos"] = vec_json(f.wrist_pos);
        fj["hand_type"] = static_cast<int>(f.hand_type);
        ojson flags = ojson::array();
        for (bool b : f.gesture_flags) flags.push_back(b ? 1 : 0);
        fj["gesture_flags"] = std::move(flags);
        ojson fingers = ojson::array();
        for (const FingerState& fs : f.fingers) {
            fingers.push_back(ojson{{"tip_pos", vec_json(fs.tip_pos)},
                                    {"tip_velocity", vec_json(fs.tip_velocity)},
                                    {"tip_direction", vec_json(fs.tip_direction)},
                                    {"length", fs.length},
                                    {"width", fs.width}});
        }
        fj["fingers"] = std::move(fingers);
        frames.push_back(std::move(fj));
    }
    j["frames"] = std::move(frames);
    return j;
}

RawSample sample_from_json(const nlohmann::json& j) {
    RawSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.user_id = j.at("user_id").get<std::string>();
    const auto name = j.at("gesture").get<std::string>();
    const auto g = parse_gesture(name);
    if (!g) throw DataError("unknown gesture label '" + name + "'");
    s.gesture = *g;
    s.batch = j.at("batch").get<int>();
    for (const auto& fj : j.at("frames")) {
        RawFrame f;
        f.timestamp = fj.at("timestamp").get<double>();
        f.grab_strength = fj.at("grab_strength").get<double>();
        f.pinch_strength = fj.at("pinch_strength").get<double>();
        f.pitch = fj.at("pitch").get<double>();
        f.yaw = fj.at("yaw").get<double>();
        f.roll = fj.at("roll").get<double>();
        f.palm_width = fj.at("palm_width").get<double>();
        f.palm_pos = vec_from(fj, "palm_pos");
        f.arm_pos = vec_from(fj, "arm_pos");
        f.wrist_pos = vec_from(fj, "wrist_pos");
        const int hand = fj.at("hand_type").get<int>();
        if (hand != 0 && hand != 1) throw DataError("hand_type must be 0 or 1");
        f.hand_type = static_cast<HandType>(hand);
        const auto& flags = fj.at("gesture_flags");
        if (!flags.is_array() || flags.size() != 4) throw DataError("gesture_flags must have 4 entries");
        for (std::size_t i = 0; i < 4; ++i) {
            const int v = flags[i].get<int>();
            if (v != 0 && v != 1) throw DataError("gesture flags must be 0 or 1");
            f.gesture_flags[i] = v == 1;
        }
        const auto& fingers = fj.at("fingers");
        if (!fingers.is_array() || fingers.size() != 5) throw DataError("a frame needs exactly 5 fingers");
        for (std::size_t i = 0; i < 5; ++i) {
            FingerState& fs = f.fingers[i];
            fs.tip_pos = vec_from(fingers[i], "tip_pos");
            fs.tip_velocity = vec_from(fingers[i], "tip_velocity");
            fs.tip_direction = vec_from(fingers[i], "tip_direction");
            fs.length = fingers[i].at("length").get<double>();
            fs.width = fingers[i].at("width").get<double>();
        }
        s.frames.push_back(f);
    }
    validate(s);
    return s;
}

SampleFile read_sample_file(std::istream& in) {
    SampleFile file;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (!header_seen) {
                check_header(j);
                if (j.contains("metadata")) file.metadata = nlohmann::ordered_json::parse(j["metadata"].dump());
                header_seen = true;
                continue;
            }
            file.samples.push_back(sample_from_json(j));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return file;
}

SampleFile read_sample_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open sample file " + path.string());
    return read_sample_file(in);
}

std::vector<RawSample> read_samples(const std::filesystem::path& path) { return read_sample_file(path).samples; }

void write_samples(std::ostream& out, std::span<const RawSample> samples, const nlohmann::ordered_json& metadata) {
    out << header_json(metadata).dump() << '\n';
    for (const RawSample& s : samples) {
        validate(s);
        out << sample_to_json(s).dump() << '\n';
    }
}

void write_samples(const std::filesystem::path& path, std::span<const RawSample> samples,
                   const nlohmann::ordered_json& metadata) {
    std::ostringstream os;
    write_samples(os, samples, metadata);
    write_file_atomic(path, os.str());
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xF];
    }
    return hex;
}

std::string content_hash(std::span<const RawSample> samples) {
    std::string text;
    for (const RawSample& s : samples) {
        text += s.sample_id + '|' + s.user_id + '|' + std::string(to_string(s.gesture)) + '|' +
                std::to_string(s.batch) + '\n';
        for (const RawFrame& f : s.frames) {
            for (double v : {f.timestamp, f.grab_strength, f.pinch_strength, f.pitch, f.yaw, f.roll, f.palm_width}) {
                append_fixed(text, v);
            }
            for (const Vec3* v : {&f.palm_pos, &f.arm_pos, &f.wrist_pos}) {
                for (double x : *v) append_fixed(text, x);
            }
            text += f.hand_type == HandType::Right ? 'R' : 'L';
            for (bool b : f.gesture_flags) text += b ? '1' : '0';
            for (const FingerState& fs : f.fingers) {
                for (const Vec3* v : {&fs.tip_pos, &fs.tip_velocity, &fs.tip_direction}) {
                    for (double x : *v) append_fixed(text, x);
                }
                append_fixed(text, fs.length);
                append_fixed(text, fs.width);
            }
            text += '\n';
        }
    }
    return sha256_hex(text);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace airgate
