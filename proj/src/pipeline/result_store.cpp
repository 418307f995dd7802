#include "decbench/pipeline/result_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "decbench/error.hpp"
#include "decbench/format.hpp"

namespace decbench::pipeline {

using nlohmann::json;

double bitrate_kbps(std::uintmax_t bytes, double frame_rate, std::size_t frames) {
  if (frames == 0) throw Error(Errc::kInvalidArgument, "bitrate: zero frames");
  return 8.0 * static_cast<double>(bytes) * frame_rate / (1000.0 * static_cast<double>(frames));
}

std::string to_json_line(const ResultRecord& r) {
  json samples = json::array();
  for (const auto& s : r.energy.samples) samples.push_back({s.energy_j, s.time_s});
  json j{
      {"sequence", r.sequence},
      {"class", r.sequence_class},
      {"config", r.config},
      {"qp", r.qp},
      {"variant", r.variant},
      {"role", r.role},
      {"content_hash", r.content_hash},
      {"bitstream", r.bitstream},
      {"status", r.status},
      {"error", r.error},
      {"warnings", r.warnings},
      {"bitstream_bytes", r.bitstream_bytes},
      {"bitrate_kbps", r.bitrate_kbps},
      {"psnr",
       {{"y", r.psnr.psnr_y},
        {"u", r.psnr.psnr_u},
        {"v", r.psnr.psnr_v},
        {"yuv", r.psnr.psnr_yuv},
        {"clamped_frames", r.psnr.clamped_frames}}},
      {"energy",
       {{"mean_energy_j", r.energy.mean_energy_j},
        {"mean_time_s", r.energy.mean_time_s},
        {"sample_count", r.energy.sample_count},
        {"half_width_j", r.energy.half_width_j},
        {"confident", r.energy.confident},
        {"excluded_samples", r.energy.excluded_samples},
        {"samples", samples}}},
      {"decode_time_s", r.decode_time_s},
  };
  return j.dump();
}

ResultRecord from_json_line(const std::string& line) {
  ResultRecord r;
  try {
    const json j = json::parse(line);
    r.sequence = j.at("sequence").get<std::string>();
    r.sequence_class = j.at("class").get<std::string>();
    r.config = j.at("config").get<std::string>();
    r.qp = j.at("qp").get<int>();
    r.variant = j.at("variant").get<std::string>();
    r.role = j.value("role", "");
    r.content_hash = j.value("content_hash", "");
    r.bitstream = j.value("bitstream", "");
    r.status = j.at("status").get<std::string>();
    r.error = j.value("error", "");
    r.warnings = j.value("warnings", std::vector<std::string>{});
    r.bitstream_bytes = j.value("bitstream_bytes", std::uintmax_t{0});
    r.bitrate_kbps = j.value("bitrate_kbps", 0.0);
    if (j.contains("psnr")) {
      const auto& p = j["psnr"];
      r.psnr.psnr_y = p.value("y", 0.0);
      r.psnr.psnr_u = p.value("u", 0.0);
      r.psnr.psnr_v = p.value("v", 0.0);
      r.psnr.psnr_yuv = p.value("yuv", 0.0);
      r.psnr.clamped_frames = p.value("clamped_frames", std::size_t{0});
    }
    if (j.contains("energy")) {
      const auto& e = j["energy"];
      r.energy.mean_energy_j = e.value("mean_energy_j", 0.0);
      r.energy.mean_time_s = e.value("mean_time_s", 0.0);
      r.energy.sample_count = e.value("sample_count", std::size_t{0});
      r.energy.half_width_j = e.value("half_width_j", 0.0);
      r.energy.confident = e.value("confident", false);
      r.energy.excluded_samples = e.value("excluded_samples", std::size_t{0});
      if (e.contains("samples")) {
        for (const auto& s : e["samples"]) {
          r.energy.samples.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
        }
      }
    }
    r.decode_time_s = j.value("decode_time_s", 0.0);
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("bad result record: ") + e.what());
  }
  return r;
}

void ResultStore::append(const ResultRecord& record) const {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot append to result store " + path_.string());
  out << to_json_line(record) << '\n';
  out.flush();
  if (!out) throw Error(Errc::kIo, "write to result store " + path_.string() + " failed");
}

std::vector<ResultRecord> ResultStore::load_all(std::vector<std::string>* notices) const {
  std::vector<ResultRecord> out;
  std::ifstream in(path_, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(from_json_line(line));
    } catch (const Error& e) {
      if (notices) {
        notices->push_back(path_.string() + ":" + std::to_string(line_no) +
                           ": skipped unreadable record");
      }
    }
  }
  return out;
}

std::vector<ResultRecord> ResultStore::load_latest(std::vector<std::string>* notices) const {
  std::map<std::tuple<std::string, std::string, int, std::string>, ResultRecord> latest;
  for (auto& r : load_all(notices)) {
    auto key = r.key();
    latest.insert_or_assign(std::move(key), std::move(r));
  }
  std::vector<ResultRecord> out;
  out.reserve(latest.size());
  for (auto& [key, r] : latest) out.push_back(std::move(r));
  return out;
}

std::string export_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << "sequence,class,config,qp,variant,bitrate_kbps,psnr_y,psnr_u,psnr_v,psnr_yuv,"
         "energy_j,energy_halfwidth_j,samples,time_s\n";
  for (const auto& r : records) {
    if (!r.measured()) continue;
    out << r.sequence << ',' << r.sequence_class << ',' << r.config << ',' << r.qp << ','
        << r.variant << ',' << format_fixed(r.bitrate_kbps, 4) << ','
        << format_fixed(r.psnr.psnr_y, 4) << ',' << format_fixed(r.psnr.psnr_u, 4) << ','
        << format_fixed(r.psnr.psnr_v, 4) << ',' << format_fixed(r.psnr.psnr_yuv, 4) << ','
        << format_fixed(r.energy.mean_energy_j, 6) << ','
        << format_fixed(r.energy.half_width_j, 6) << ',' << r.energy.sample_count << ','
        << format_fixed(r.decode_time_s, 6) << '\n';
  }
  return out.str();
}

}  // namespace decbench::pipeline
