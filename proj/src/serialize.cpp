#include "olsattn/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace olsattn {

namespace {

constexpr const char* kVersionTag = "ols-attention v1";

const char* distribution_name(InputDistribution dist) {
    return dist == InputDistribution::uniform ? "uniform" : "gaussian";
}

std::string header_line(const char* command, std::uint64_t seed) {
    return std::string("# ") + kVersionTag + ", command=" + command + ", seed=" + std::to_string(seed) + "\n";
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string trace_to_csv(const TrainingTrace& trace) {
    std::string out = header_line("train", trace.seed);
    out += "epoch,mse,rel_dist_to_ols,l_value\n";
    for (const TraceRecord& r : trace.records) {
        out += std::to_string(r.epoch);
        out += ',';
        out += format_double(r.mse);
        out += ',';
        out += format_double(r.rel_dist_to_ols);
        out += ',';
        out += format_double(r.l_value);
        out += '\n';
    }
    return out;
}

std::string trace_to_json(const TrainingTrace& trace) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersionTag;
    doc["command"] = "train";
    doc["config"] = {
        {"n", trace.config.n},
        {"slope", trace.config.slope},
        {"noise_var", trace.config.noise_var},
        {"l0", trace.config.l0},
        {"epochs", trace.config.epochs},
        {"lr", trace.config.lr},
        {"beta1", trace.config.beta1},
        {"beta2", trace.config.beta2},
        {"eps", trace.config.eps},
        {"seed", trace.config.seed},
        {"distribution", distribution_name(trace.config.dist)},
        {"record_every", trace.config.record_every},
    };
    doc["l_star"] = trace.l_star;
    if (trace.near_zero_stall_epoch) {
        doc["near_zero_stall_epoch"] = *trace.near_zero_stall_epoch;
    } else {
        doc["near_zero_stall_epoch"] = nullptr;
    }
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const TraceRecord& r : trace.records) {
        records.push_back({{"epoch", r.epoch},
                           {"mse", r.mse},
                           {"rel_dist_to_ols", r.rel_dist_to_ols},
                           {"l_value", r.l_value}});
    }
    doc["records"] = std::move(records);
    return doc.dump(2) + "\n";
}

std::string equiv_to_csv(const std::vector<EquivTrial>& rows, const EquivSweepConfig& config) {
    std::string out = header_line("equiv", config.seed);
    out += "trial,n,k,max_abs_diff,rel_frobenius_diff,whitening_residual\n";
    for (const EquivTrial& r : rows) {
        out += std::to_string(r.trial);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        out += format_double(r.report.max_abs_diff);
        out += ',';
        out += format_double(r.report.rel_frobenius_diff);
        out += ',';
        out += format_double(r.report.whitening_residual);
        out += '\n';
    }
    return out;
}

std::string equiv_to_json(const std::vector<EquivTrial>& rows, const EquivSweepConfig& config) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersionTag;
    doc["command"] = "equiv";
    doc["config"] = {
        {"trials", config.trials},
        {"n", config.max_n},
        {"k", config.max_k},
        {"seed", config.seed},
        {"debug_scores", config.debug_scores},
    };
    double max_rel = 0.0;
    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    for (const EquivTrial& r : rows) {
        max_rel = std::max(max_rel, r.report.rel_frobenius_diff);
        trials.push_back({{"trial", r.trial},
                          {"n", r.n},
                          {"k", r.k},
                          {"max_abs_diff", r.report.max_abs_diff},
                          {"rel_frobenius_diff", r.report.rel_frobenius_diff},
                          {"whitening_residual", r.report.whitening_residual}});
    }
    doc["max_rel_frobenius_diff"] = max_rel;
    doc["trials"] = std::move(trials);
    return doc.dump(2) + "\n";
}

std::string shift_to_csv(const std::vector<ShiftSweepRow>& rows, const ShiftSweepConfig& config) {
    std::string out = header_line("shift", config.seed);
    out += "shift_kind,shift_param,relative_error,distortion_frobenius_dist_from_identity\n";
    for (const ShiftSweepRow& r : rows) {
        out += r.shift_kind;
        out += ',';
        out += format_double(r.shift_param);
        out += ',';
        out += format_double(r.relative_error);
        out += ',';
        out += format_double(r.distortion_dist);
        out += '\n';
    }
    return out;
}

std::string shift_to_json(const std::vector<ShiftSweepRow>& rows, const ShiftSweepConfig& config) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersionTag;
    doc["command"] = "shift";
    doc["config"] = {
        {"n", config.n},
        {"k", config.k},
        {"m", config.m},
        {"seed", config.seed},
        {"shift_kind", shift_kind_name(config.kind)},
        {"grid", {{"lo", config.grid_lo}, {"hi", config.grid_hi}, {"step", config.grid_step}}},
    };
    nlohmann::ordered_json out_rows = nlohmann::ordered_json::array();
    for (const ShiftSweepRow& r : rows) {
        out_rows.push_back({{"shift_kind", r.shift_kind},
                            {"shift_param", r.shift_param},
                            {"relative_error", r.relative_error},
                            {"distortion_frobenius_dist_from_identity", r.distortion_dist}});
    }
    doc["rows"] = std::move(out_rows);
    return doc.dump(2) + "\n";
}

namespace {

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string shift_report_to_json(const ShiftReport& report) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersionTag;
    doc["sigma_x"] = matrix_to_json(report.sigma_x);
    doc["sigma_z"] = matrix_to_json(report.sigma_z);
    doc["distortion"] = matrix_to_json(report.distortion);
    doc["predicted"] = matrix_to_json(report.predicted);
    doc["ideal"] = matrix_to_json(report.ideal);
    doc["relative_error"] = report.relative_error;
    return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace olsattn
