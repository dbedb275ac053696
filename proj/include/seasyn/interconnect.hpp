#pragma once

#include <string>
#include <vector>

#include "seasyn/state_space.hpp"

namespace seasyn {

/// One summand feeding an internal input: either a subsystem output or an
/// external input, referenced by name, scaled by gain.
struct SignalSource {
    std::string name;
    double      gain = 1.0;
};

/// Wiring for one subsystem input. Inputs not mentioned here are wired by
/// name to the matching external input (if any).
struct Connection {
    std::string               input;
    std::vector<SignalSource> sources;
};

struct InterconnectSpec {
    std::vector<std::string> external_inputs;
    std::vector<Connection>  connections;
    std::vector<std::string> external_outputs;  // names of subsystem outputs to expose
};

/// Flattens a block diagram into one state-space model. All subsystem channel
/// names must be globally unique. Throws UnwiredInput / UnwiredOutput for
/// dangling signals and AlgebraicLoop when the feedthrough loop is singular
/// (spectral radius of the loop feedthrough >= 1 - 1e-9 and not nilpotent).
StateSpaceModel interconnect(const std::vector<StateSpaceModel>& systems,
                             const InterconnectSpec& spec);

// Convenience wrappers built on interconnect().
StateSpaceModel series(const StateSpaceModel& first, const StateSpaceModel& second);
StateSpaceModel unity_feedback(const StateSpaceModel& forward_path);  // negative feedback

}  // namespace seasyn
