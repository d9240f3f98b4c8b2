// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace swarmft {

enum class Errc {
  DimensionMismatch,
  InvalidCoordinate,
  InvalidLeafCount,
  InvalidFanIn,
  FeedSizeMismatch,
  NoEscapeRoute,
  SpawnFailed,
  TransferIncomplete,
  AckTimeout,
  UnknownDependency,
  UnknownNode,
  IncompleteRow,
  MissingNodeMean,
  MissingEntries,
  ConfigInvalid,
  ParseError,
  IncompleteData,
  PolicyViolation,
  IoError,
};

const char* errc_name(Errc c);

/// Domain error: carries a machine-readable code plus a human message.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidCoordinate: return "InvalidCoordinate";
    case Errc::InvalidLeafCount: return "InvalidLeafCount";
    case Errc::InvalidFanIn: return "InvalidFanIn";
    case Errc::FeedSizeMismatch: return "FeedSizeMismatch";
    case Errc::NoEscapeRoute: return "NoEscapeRoute";
    case Errc::SpawnFailed: return "SpawnFailed";
    case Errc::TransferIncomplete: return "TransferIncomplete";
    case Errc::AckTimeout: return "AckTimeout";
    case Errc::UnknownDependency: return "UnknownDependency";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::IncompleteRow: return "IncompleteRow";
    case Errc::MissingNodeMean: return "MissingNodeMean";
    case Errc::MissingEntries: return "MissingEntries";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::ParseError: return "ParseError";
    case Errc::IncompleteData: return "IncompleteData";
    case Errc::PolicyViolation: return "PolicyViolation";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace swarmft
