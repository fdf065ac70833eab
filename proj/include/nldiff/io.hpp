#pragma once

#include "nldiff/estimates.hpp"
#include "nldiff/evolution.hpp"
#include "nldiff/grid.hpp"
#include "nldiff/kernels.hpp"

#include <string>

namespace nldiff {

/// CSV field I/O. 1-D files carry x,value rows; higher dimensions carry
/// i,j[,k],value rows in row-major (FFT index) order.
void write_field_csv(const Field& f, const std::string& path);
Field read_field_csv(const Grid& grid, const std::string& path);

/// Compact binary format: uint32 dim, uint32 n, float64 L (little-endian),
/// then n^dim float64 values row-major.
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

/// KernelReport -> JSON (fitted constants, classification, window, flags).
std::string kernel_report_json(const KernelReport& report);
void write_kernel_report(const KernelReport& report, const std::string& path);

/// EstimateReport -> JSON and CSV data table.
std::string estimate_report_json(const EstimateReport& report,
                                 const std::string& paper_ref);
void write_estimate_report(const EstimateReport& report, const std::string& paper_ref,
                           const std::string& json_path);
void write_estimate_table_csv(const EstimateReport& report, const std::string& path);

/// Trajectory directory: meta.json, diagnostics.csv, snapshot fields
/// (snap_<index>.csv or .bin per `binary`).
void write_trajectory(const Trajectory& traj, const std::string& dir,
                      bool binary = false);

} // namespace nldiff
