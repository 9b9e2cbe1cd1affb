#include "issng/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace issng {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, res.ptr);
}

std::string csv_string(const std::vector<IterationRecord>& records) {
  std::ostringstream os;
  os << "k, norm_F, norm_ry, norm_rp, eta, gmres_iters, gmres_relres, delta, "
        "backtracks, tau, merit\n";
  for (const IterationRecord& r : records) {
    os << r.k << ", " << format_double(r.norm_F) << ", "
       << format_double(r.norm_ry) << ", " << format_double(r.norm_rp) << ", "
       << format_double(r.eta) << ", " << r.gmres_iters << ", "
       << format_double(r.gmres_relres) << ", " << format_double(r.delta)
       << ", " << r.backtracks << ", " << format_double(r.tau) << ", "
       << format_double(r.merit) << "\n";
  }
  return os.str();
}

void write_csv(const std::string& path,
               const std::vector<IterationRecord>& records) {
  write_text_file(path, csv_string(records));
}

nlohmann::json records_json(const std::vector<IterationRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const IterationRecord& r : records) {
    arr.push_back({{"k", r.k},
                   {"norm_F", r.norm_F},
                   {"norm_ry", r.norm_ry},
                   {"norm_rp", r.norm_rp},
                   {"eta", r.eta},
                   {"gmres_iters", r.gmres_iters},
                   {"gmres_relres", r.gmres_relres},
                   {"delta", r.delta},
                   {"backtracks", r.backtracks},
                   {"tau", r.tau},
                   {"merit", r.merit}});
  }
  return arr;
}

std::vector<IterationRecord> records_from_json(const nlohmann::json& j) {
  std::vector<IterationRecord> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    IterationRecord r;
    r.k = e.at("k").get<std::size_t>();
    r.norm_F = e.at("norm_F").get<double>();
    r.norm_ry = e.at("norm_ry").get<double>();
    r.norm_rp = e.at("norm_rp").get<double>();
    r.eta = e.at("eta").get<double>();
    r.gmres_iters = e.at("gmres_iters").get<std::size_t>();
    r.gmres_relres = e.at("gmres_relres").get<double>();
    r.delta = e.at("delta").get<double>();
    r.backtracks = e.at("backtracks").get<std::size_t>();
    r.tau = e.at("tau").get<double>();
    r.merit = e.at("merit").get<double>();
    out.push_back(r);
  }
  return out;
}

nlohmann::json config_json(const SolverConfig& cfg) {
  return {{"c1", cfg.c1},
          {"theta", cfg.theta},
          {"delta0", cfg.delta0},
          {"eta0", cfg.eta0},
          {"eta_max", cfg.eta_max},
          {"gamma", cfg.gamma},
          {"a1", cfg.a1},
          {"tol", cfg.tol},
          {"eta_floor", cfg.eta_floor},
          {"max_newton", cfg.max_newton},
          {"max_backtracks", cfg.max_backtracks},
          {"window", cfg.window},
          {"variant", cfg.variant == Variant::issng ? "issng" : "issng-l"},
          {"restart", cfg.restart},
          {"gmres_max_iters", cfg.gmres_max_iters}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace issng
