#include "gvf/types.hpp"

namespace gvf {

std::string to_string(RotationSense sense) {
    return sense == RotationSense::clockwise ? "clockwise" : "counterclockwise";
}

RotationSense rotation_sense_from_string(const std::string &text) {
    if (text == "clockwise" || text == "cw") {
        return RotationSense::clockwise;
    }
    if (text == "counterclockwise" || text == "ccw") {
        return RotationSense::counterclockwise;
    }
    throw ScenarioError("unknown rotation sense '" + text + "'");
}

} // namespace gvf
