#pragma once

// Volumes are stored as a JSON sidecar `<name>.json` next to a headerless
// `<name>.raw` holding little-endian 32-bit values, channels-first, C-order.
//
//   affinities: {"format":"mws-affinity v1","shape":[Z,Y,X],"channels":C,
//                "dtype":"f32","order":"C","pattern":[...]}
//   labels:     {"format":"mws-label v1","shape":[Z,Y,X],"channels":1,
//                "dtype":"u32","order":"C"}
//
// A pattern entry is {"offset":[dz,dy,dx],"polarity":"+"|"-","stride":[sz,sy,sx]}.
// Affinity positions whose partner lies outside the volume, or that are off
// the entry's stride lattice, carry no edge and are never read.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mws/grid.hpp"

namespace mws {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json shape_json(const Shape& s) { return Json::array({s.z, s.y, s.x}); }

inline Shape shape_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw InputError("shape must be [Z, Y, X]");
    Shape s;
    std::size_t ext[3];
    for (int a = 0; a < 3; ++a) {
        if (!j[a].is_number_unsigned() || j[a].get<std::uint64_t>() == 0)
            throw InputError("shape extents must be positive integers");
        ext[a] = j[a].get<std::size_t>();
    }
    s = {ext[0], ext[1], ext[2]};
    if (s.size() > std::size_t{UINT32_MAX}) throw InputError("volume too large");
    return s;
}

inline std::array<int, 3> triple_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw InputError(std::string("pattern: ") + what + " must have 3 entries");
    std::array<int, 3> out{};
    for (int a = 0; a < 3; ++a) {
        if (!j[a].is_number_integer()) throw InputError(std::string("pattern: ") + what + " must be integers");
        out[a] = j[a].get<int>();
    }
    return out;
}

inline Json parse_json(std::istream& in, const char* what) {
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

inline void require_field(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string(what) + ": missing \"" + key + "\"");
}

inline void write_u32_le(std::ostream& out, std::uint32_t bits) {
    const char b[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                       static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
    out.write(b, 4);
}

inline std::string read_all(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::uint32_t u32_le(const std::string& bytes, std::size_t k) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + 4 * k;
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

inline void check_header(const Json& j, const char* format, const char* dtype, const char* what) {
    for (const char* key : {"format", "shape", "channels", "dtype", "order"}) require_field(j, key, what);
    if (j["format"] != format) throw InputError(std::string(what) + ": format must be \"" + format + "\"");
    if (j["dtype"] != dtype) throw InputError(std::string(what) + ": dtype must be \"" + dtype + "\"");
    if (j["order"] != "C") throw InputError(std::string(what) + ": order must be \"C\"");
    if (!j["channels"].is_number_unsigned()) throw InputError(std::string(what) + ": bad channel count");
}

inline std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot open " + p.string());
    return in;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
}

} // namespace detail

inline Json pattern_to_json(const OffsetPattern& pattern) {
    Json arr = Json::array();
    for (const Offset& o : pattern.entries()) {
        Json e;
        e["offset"] = Json::array({o.delta[0], o.delta[1], o.delta[2]});
        e["polarity"] = std::string(1, polarity_symbol(o.polarity));
        e["stride"] = Json::array({o.stride[0], o.stride[1], o.stride[2]});
        arr.push_back(std::move(e));
    }
    return arr;
}

inline OffsetPattern pattern_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("pattern must be a JSON array");
    std::vector<Offset> entries;
    for (const Json& e : j) {
        detail::require_field(e, "offset", "pattern entry");
        detail::require_field(e, "polarity", "pattern entry");
        Offset o;
        o.delta = detail::triple_from_json(e["offset"], "offset");
        if (e["polarity"] == "+")
            o.polarity = Polarity::attractive;
        else if (e["polarity"] == "-")
            o.polarity = Polarity::repulsive;
        else
            throw InputError("pattern: polarity must be \"+\" or \"-\"");
        if (e.contains("stride")) o.stride = detail::triple_from_json(e["stride"], "stride");
        entries.push_back(o);
    }
    return OffsetPattern(std::move(entries));
}

inline OffsetPattern read_pattern(std::istream& in) { return pattern_from_json(detail::parse_json(in, "pattern")); }

inline OffsetPattern read_pattern(const std::filesystem::path& p) {
    auto in = detail::open_in(p);
    return read_pattern(in);
}

// "default2d", "default3d", or a path to a pattern JSON file.
inline OffsetPattern resolve_pattern(const std::string& spec) {
    if (spec == "default2d") return default_pattern_2d();
    if (spec == "default3d") return default_pattern_3d();
    return read_pattern(std::filesystem::path(spec));
}

// Sidecar path pair for a volume name; accepts "<name>", "<name>.json" or
// "<name>.raw".
struct VolumePaths {
    std::filesystem::path json, raw;

    explicit VolumePaths(std::filesystem::path name) {
        if (name.extension() == ".json" || name.extension() == ".raw") name.replace_extension();
        json = name;
        json += ".json";
        raw = name;
        raw += ".raw";
    }
};

// ---- affinities ----

struct AffinityFile {
    AffinityVolume volume;
    OffsetPattern pattern;
};

inline void write_affinities(const AffinityVolume& vol, const OffsetPattern& pattern, std::ostream& header,
                             std::ostream& raw) {
    detail::check_channels(vol, pattern);
    Json j;
    j["format"] = "mws-affinity v1";
    j["shape"] = detail::shape_json(vol.shape);
    j["channels"] = vol.channels;
    j["dtype"] = "f32";
    j["order"] = "C";
    j["pattern"] = pattern_to_json(pattern);
    header << j.dump(2) << '\n';
    for (float v : vol.data) detail::write_u32_le(raw, std::bit_cast<std::uint32_t>(v));
}

inline AffinityFile read_affinities(std::istream& header, std::istream& raw) {
    const Json j = detail::parse_json(header, "affinity header");
    detail::check_header(j, "mws-affinity v1", "f32", "affinity header");
    detail::require_field(j, "pattern", "affinity header");
    AffinityFile out;
    out.pattern = pattern_from_json(j["pattern"]);
    out.volume.shape = detail::shape_from_json(j["shape"]);
    out.volume.channels = j["channels"].get<std::size_t>();
    if (out.volume.channels != out.pattern.size())
        throw InputError("affinity header: " + std::to_string(out.volume.channels) + " channels but " +
                         std::to_string(out.pattern.size()) + " pattern entries");

    const std::string bytes = detail::read_all(raw);
    const std::size_t count = out.volume.shape.size() * out.volume.channels;
    if (bytes.size() != 4 * count)
        throw InputError("affinity data: expected " + std::to_string(4 * count) + " bytes, got " +
                         std::to_string(bytes.size()));
    out.volume.data.resize(count);
    for (std::size_t k = 0; k < count; ++k) out.volume.data[k] = std::bit_cast<float>(detail::u32_le(bytes, k));
    out.volume.validate();
    return out;
}

inline void write_affinities(const AffinityVolume& vol, const OffsetPattern& pattern, const std::filesystem::path& name) {
    const VolumePaths p(name);
    auto h = detail::open_out(p.json);
    auto r = detail::open_out(p.raw);
    write_affinities(vol, pattern, h, r);
}

inline AffinityFile read_affinities(const std::filesystem::path& name) {
    const VolumePaths p(name);
    auto h = detail::open_in(p.json);
    auto r = detail::open_in(p.raw);
    return read_affinities(h, r);
}

// ---- labels ----

inline void write_labels(const LabelVolume& labels, std::ostream& header, std::ostream& raw) {
    if (labels.labels.size() != labels.shape.size()) throw InputError("label volume: data size mismatch");
    Json j;
    j["format"] = "mws-label v1";
    j["shape"] = detail::shape_json(labels.shape);
    j["channels"] = 1;
    j["dtype"] = "u32";
    j["order"] = "C";
    header << j.dump(2) << '\n';
    for (std::uint32_t v : labels.labels) detail::write_u32_le(raw, v);
}

inline LabelVolume read_labels(std::istream& header, std::istream& raw) {
    const Json j = detail::parse_json(header, "label header");
    detail::check_header(j, "mws-label v1", "u32", "label header");
    if (j["channels"] != 1) throw InputError("label header: channels must be 1");
    LabelVolume out(detail::shape_from_json(j["shape"]));
    const std::string bytes = detail::read_all(raw);
    if (bytes.size() != 4 * out.labels.size())
        throw InputError("label data: expected " + std::to_string(4 * out.labels.size()) + " bytes, got " +
                         std::to_string(bytes.size()));
    for (std::size_t k = 0; k < out.labels.size(); ++k) out.labels[k] = detail::u32_le(bytes, k);
    return out;
}

inline void write_labels(const LabelVolume& labels, const std::filesystem::path& name) {
    const VolumePaths p(name);
    auto h = detail::open_out(p.json);
    auto r = detail::open_out(p.raw);
    write_labels(labels, h, r);
}

inline LabelVolume read_labels(const std::filesystem::path& name) {
    const VolumePaths p(name);
    auto h = detail::open_in(p.json);
    auto r = detail::open_in(p.raw);
    return read_labels(h, r);
}

} // namespace mws
