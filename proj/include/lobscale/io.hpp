#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lobscale/common.hpp"

namespace lobscale {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view data);

/// CSV with a single leading comment line carrying provenance
/// (version, config hash, seed) so outputs are self-describing, followed by a
/// header row. Numeric formatting uses shortest-roundtrip so identical values
/// produce identical bytes.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& meta,
              const std::vector<std::string>& header);

    void field(const std::string& v);
    void field(double v);
    void field(std::int64_t v);
    void field(std::uint64_t v);
    void end_row();

    template <typename... Ts>
    void row(const Ts&... vs) {
        (field(vs), ...);
        end_row();
    }

private:
    std::ofstream out_;
    bool row_started_ = false;
};

std::string format_double(double v);

std::string provenance_meta(const json& resolved_config, std::uint64_t seed);

void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace lobscale
