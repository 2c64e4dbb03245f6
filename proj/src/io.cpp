#include "lobscale/io.hpp"

#include <charconv>

namespace lobscale {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& meta,
                     const std::vector<std::string>& header)
    : out_(path) {
    if (!out_) throw config_error("cannot open output file: " + path.string());
    out_ << "# " << meta << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
}

void CsvWriter::field(const std::string& v) {
    if (row_started_) out_ << ",";
    out_ << v;
    row_started_ = true;
}
void CsvWriter::field(double v) { field(format_double(v)); }
void CsvWriter::field(std::int64_t v) { field(std::to_string(v)); }
void CsvWriter::field(std::uint64_t v) { field(std::to_string(v)); }

void CsvWriter::end_row() {
    out_ << "\n";
    row_started_ = false;
}

std::string provenance_meta(const json& resolved_config, std::uint64_t seed) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(resolved_config.dump())));
    return "lobscale=" + std::string(kVersion) + " config_hash=" + hex +
           " seed=" + std::to_string(seed);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace lobscale
