#include "memnoise/io.hpp"

#include <bit>
#include <charconv>
#include <fstream>

#include <json.hpp>

#include "memnoise/errors.hpp"

namespace memnoise::io {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_record_csv(const noise::NoiseRecord& record, const std::filesystem::path& path) {
    std::string out;
    out.reserve(record.samples.size() * 24 + 16);
    out += "index,t,value\n";
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(static_cast<double>(i) * record.dt);
        out += ',';
        out += format_double(record.samples[i]);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_record_raw(const noise::NoiseRecord& record, std::uint64_t seed,
                      std::uint64_t stream, const std::filesystem::path& path) {
    std::string bytes;
    bytes.reserve(record.samples.size() * 8);
    for (double sample : record.samples) {
        auto word = std::bit_cast<std::uint64_t>(sample);
        for (int byte = 0; byte < 8; ++byte)
            bytes.push_back(static_cast<char>((word >> (8 * byte)) & 0xff));
    }
    write_file_atomic(path, bytes);

    nlohmann::json sidecar;
    sidecar["fs"] = record.sample_rate();
    sidecar["band_low"] = record.band_low;
    sidecar["band_high"] = record.band_high;
    sidecar["psd_level"] = record.target_psd_level;
    sidecar["seed"] = seed;
    sidecar["stream"] = stream;
    sidecar["role"] = noise::role_name(record.role);
    sidecar["n_samples"] = record.samples.size();
    sidecar["encoding"] = "float64-little-endian";
    auto sidecar_path = path;
    sidecar_path += ".json";
    write_file_atomic(sidecar_path, sidecar.dump(2) + "\n");
}

std::vector<double> read_raw_f64(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open raw record: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) throw ArgumentError("raw record size is not a multiple of 8");
    std::vector<double> samples(bytes.size() / 8);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::uint64_t word = 0;
        for (int byte = 7; byte >= 0; --byte)
            word = (word << 8) | static_cast<unsigned char>(bytes[i * 8 + byte]);
        samples[i] = std::bit_cast<double>(word);
    }
    return samples;
}

void write_trace_csv(const circuits::CircuitTrace& trace, double dt,
                     const std::filesystem::path& path) {
    std::string out = "index,t,current,node_voltage,charge,power_a,power_b\n";
    for (std::size_t i = 0; i < trace.current.size(); ++i) {
        const std::size_t sample_index = i * trace.decimation;
        out += std::to_string(sample_index);
        out += ',';
        out += format_double(static_cast<double>(sample_index) * dt);
        out += ',';
        out += format_double(trace.current[i]);
        out += ',';
        out += format_double(trace.node_voltage[i]);
        out += ',';
        out += format_double(i < trace.charge.size() ? trace.charge[i] : 0.0);
        out += ',';
        out += format_double(trace.power_a[i]);
        out += ',';
        out += format_double(trace.power_b[i]);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArgumentError("cannot open for writing: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw ArgumentError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace memnoise::io
