#pragma once

// Fixed-field MPS export of the TCVRP model, plus a reader for the subset the
// writer emits. Names longer than their fixed field push the following fields
// right; the reader splits on whitespace, so such files still round-trip.

#include <iosfwd>
#include <string>

#include "tcvrp/model.hpp"

namespace tcvrp::mps {

void write(const model::MipModel& model, std::ostream& out);
std::string to_string(const model::MipModel& model);

// Throws Error(kIo) when the file cannot be written.
void export_mps(const model::MipModel& model, const std::string& path);

// Throws Error(kInput) on constructs outside the emitted subset.
model::MipModel read(std::istream& in);
model::MipModel parse_mps(const std::string& path);

}  // namespace tcvrp::mps
