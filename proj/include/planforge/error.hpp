#pragma once

#include <stdexcept>
#include <string>

namespace planforge {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct FewerThanTwoPoints : Error {
  FewerThanTwoPoints() : Error("fewer than two points") {}
};
struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& msg = "degenerate input") : Error(msg) {}
};
struct OutOfBounds : Error {
  explicit OutOfBounds(const std::string& msg = "polygon exceeds raster grid") : Error(msg) {}
};
struct DimMismatch : Error {
  DimMismatch() : Error("raster masks have mismatched dims or transforms") {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& msg = "length mismatch") : Error(msg) {}
};
struct TooFewPoints : Error {
  explicit TooFewPoints(const std::string& msg = "too few points") : Error(msg) {}
};
struct MissingLabels : Error {
  MissingLabels() : Error("cloud has no ground-truth labels") {}
};
struct TooFewSegments : Error {
  TooFewSegments() : Error("need at least two wall segments") {}
};
struct SelfIntersecting : Error {
  explicit SelfIntersecting(const std::string& msg = "polygon is not simple") : Error(msg) {}
};
struct BothEmpty : Error {
  BothEmpty() : Error("both floorplans are empty") {}
};
struct SceneParseError : Error {
  explicit SceneParseError(const std::string& msg) : Error(msg) {}
};
struct VoteMismatch : Error {
  explicit VoteMismatch(const std::string& msg) : Error(msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace planforge
