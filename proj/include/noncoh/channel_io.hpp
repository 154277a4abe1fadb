#pragma once

// JSON channel documents.
//
//   {"kind": "memoryless", "scale": 1}
//   {"kind": "gauss_markov", "a": 0.99, "scale": 1}
//   {"kind": "bandlimited_flat", "omega0": 1.57, "scale": 1}
//   {"kind": "sequence", "r": [[1, 0], [0.5, 0]]}          (plain reals also accepted)
//   {"kind": "psd_table", "omega": [...], "s": [...]}
//   {"kind": "mimo", "entries": [[law, ...], ...]}           (nr rows of nt laws)
//   {"kind": "mimo", "alpha": [...], "entries": [law, ...]}  (transmit separable: nr base laws)
//   {"kind": "delay_spread", "taps": [law, ...]}
//   {"kind": "delay_spread", "alpha": [...], "taps": [law]}  (delay separable: one base law)
//
// "scale" defaults to 1. Malformed documents throw SpecError.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "noncoh/channel_model.hpp"

namespace noncoh {

using ChannelSpec = std::variant<ScalarFadingSpec, MimoFadingSpec, DelaySpreadSpec>;

ChannelSpec parse_channel(std::string_view json_text);
ChannelSpec load_channel(const std::filesystem::path& path);

/// Serializes a scalar law back to its JSON form.
std::string to_json(const ScalarFadingSpec& spec);

}  // namespace noncoh
