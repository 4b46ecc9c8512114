// Serialization: JSON formats for paths, orbits and reports, versioned
// CSV tables, and static SVG plots of the inertial orbit and the shape
// sphere.
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fig8/deform.hpp"
#include "fig8/orbit.hpp"
#include "fig8/schubart.hpp"

namespace fig8 {

// {alpha, masses:[m1,m2,m3], T0, times:[...], nodes:[[[re,im] x3], ...]}
nlohmann::json path_to_json(const DiscretePath& path, const Masses& m, double alpha);
// Throws std::runtime_error on missing keys or inconsistent shapes.
DiscretePath path_from_json(const nlohmann::json& j, Masses* m = nullptr,
                            double* alpha = nullptr);

// Orbit files are the path format extended with period, velocities,
// the quarter action and a free-form diagnostics object.
nlohmann::json orbit_to_json(const FullOrbit& orbit,
                             const nlohmann::json& diagnostics = nlohmann::json::object());
FullOrbit orbit_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json condition_to_json(const ConditionReport& r);
std::string condition_table(const ConditionReport& r);

// CSV emitters; the first line is a versioned schema comment.
std::string trajectory_csv(const FullOrbit& orbit);  // t,x1re,...,x3im,w1,w2,w3
std::string shape_csv(const FullOrbit& orbit);       // t,w1,w2,w3
std::string sweep_csv(const std::vector<DeformationReport>& sweep);

// Static plots: the three body curves in the inertial plane, and the
// stereographic projection (from the north pole) of the normalized
// shape curve with the collinear/Lagrange/collision landmarks.
std::string orbit_svg(const FullOrbit& orbit);
std::string shape_svg(const FullOrbit& orbit);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fig8
