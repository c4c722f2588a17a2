#include "kch/io.hpp"
#include "kch/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace kch {

std::string format_double(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string csv_header() {
    std::string s = "t";
    for (auto label : NormReport::labels()) (s += ',') += label;
    return s;
}

std::string csv_row(const OutputRow& row) {
    std::string s = format_double(row.t);
    for (double v : row.report.values()) (s += ',') += format_double(v);
    return s;
}

std::string sweep_csv_header() {
    std::string s = "nu,ok";
    for (auto label : NormReport::labels()) (s += ",max_") += label;
    return s + ",failure";
}

std::string sweep_csv_row(const SweepRow& row) {
    std::string s = format_double(row.nu) + (row.ok ? ",1" : ",0");
    for (double v : row.max_values) (s += ',') += format_double(v);
    // the message may contain commas; quote it
    std::string msg;
    for (char c : row.failure) msg += c == '"' ? std::string("\"\"") : std::string(1, c);
    return s + ",\"" + msg + "\"";
}

namespace {

constexpr char kMagic[4] = {'K', 'C', 'H', '1'};

template <class T>
T to_little(T x) {
    if constexpr (std::endian::native == std::endian::little) {
        return x;
    } else {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &x, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&x, b, sizeof(T));
        return x;
    }
}

template <class T>
void put(std::ostream& out, T x) {
    x = to_little(x);
    out.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T x{};
    in.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!in) throw ConfigError("snapshot: truncated stream");
    return to_little(x);
}

void put_array(std::ostream& out, const PlaneStack& f) {
    for (double x : f.values()) put(out, x);
}

void get_array(std::istream& in, PlaneStack& f) {
    for (double& x : f.values()) x = get<double>(in);
}

}  // namespace

Snapshot snapshot_of(const SystemState& state) {
    Snapshot s;
    s.n1 = state.plate.w.n1();
    s.n2 = state.plate.w.n2();
    s.n3 = state.fluid.v[0].n3();
    s.t = state.t;
    s.w = state.plate.w;
    s.w_t = state.plate.w_t;
    s.v = state.fluid.v;
    s.q = state.fluid.q;
    return s;
}

void write_snapshot(std::ostream& out, const Snapshot& snap) {
    out.write(kMagic, 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.n1));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.n2));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.n3));
    put(out, snap.t);
    put_array(out, snap.w);
    put_array(out, snap.w_t);
    for (const auto& c : snap.v) put_array(out, c);
    put_array(out, snap.q);
    if (!out) throw NumericsError("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError("snapshot: bad magic (expected KCH1)");
    Snapshot s;
    s.n1 = static_cast<int>(get<std::uint32_t>(in));
    s.n2 = static_cast<int>(get<std::uint32_t>(in));
    s.n3 = static_cast<int>(get<std::uint32_t>(in));
    const Grid g = Grid::make(s.n1, s.n2, s.n3);
    s.t = get<double>(in);
    s.w = SurfaceField(g);
    s.w_t = SurfaceField(g);
    s.v = make_vec3(g);
    s.q = VolumeField(g);
    get_array(in, s.w);
    get_array(in, s.w_t);
    for (auto& c : s.v) get_array(in, c);
    get_array(in, s.q);
    if (in.peek() != std::char_traits<char>::eof()) throw ConfigError("snapshot: trailing bytes after q");
    return s;
}

void save_snapshot(const std::string& path, const Snapshot& snap) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot open for writing");
    write_snapshot(out, snap);
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open snapshot");
    try {
        return read_snapshot(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

InitialData initial_data_of(const Snapshot& snap) {
    return {snap.v, snap.w, snap.w_t};
}

}  // namespace kch
