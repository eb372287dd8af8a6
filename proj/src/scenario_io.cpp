// SPDX-License-Identifier: Apache-2.0
//
// rissim: RIS-assisted link simulation and discrete phase-shift beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rissim/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace rissim
{

namespace
{

using nlohmann::json;

std::string line_col_of_byte(const std::string &text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void fail(const std::string &pointer, const std::string &msg)
{
    throw scenario_error(pointer.empty() ? "/" : pointer, msg);
}

void require_keys(const json &obj, const std::string &ptr, const std::set<std::string> &required,
                  const std::set<std::string> &optional)
{
    if (!obj.is_object())
        fail(ptr, "expected an object");
    for (const auto &item : obj.items()) {
        if (!required.count(item.key()) && !optional.count(item.key()))
            fail(ptr + "/" + item.key(), "unknown key");
    }
    for (const std::string &k : required)
        if (!obj.contains(k))
            fail(ptr, "missing required key '" + k + "'");
}

double get_number(const json &obj, const std::string &ptr, const std::string &key)
{
    const json &v = obj.at(key);
    if (!v.is_number())
        fail(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

int get_int(const json &obj, const std::string &ptr, const std::string &key)
{
    const json &v = obj.at(key);
    if (!v.is_number_integer())
        fail(ptr + "/" + key, "expected an integer");
    return v.get<int>();
}

Vec3d get_vec3(const json &obj, const std::string &ptr, const std::string &key)
{
    const json &v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        fail(ptr + "/" + key, "expected an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

// Orientation: exactly one of "rotation" (9 row-major numbers), "boresight"
// (direction) or "target" (point to face); "up" refines the in-plane axes.
Pose parse_pose(const json &obj, const std::string &ptr, const Vec3d &position)
{
    const int given = int(obj.contains("rotation")) + int(obj.contains("boresight")) + int(obj.contains("target"));
    if (given > 1)
        fail(ptr, "give at most one of rotation/boresight/target");

    Pose pose;
    pose.position = position;
    const Vec3d up = obj.contains("up") ? get_vec3(obj, ptr, "up") : Vec3d(0, 0, 1);
    if (obj.contains("rotation")) {
        const json &r = obj.at("rotation");
        if (!r.is_array() || r.size() != 9)
            fail(ptr + "/rotation", "expected an array of 9 numbers (row-major)");
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (!r[static_cast<std::size_t>(3 * i + j)].is_number())
                    fail(ptr + "/rotation", "expected numbers");
                pose.rotation(i, j) = r[static_cast<std::size_t>(3 * i + j)].get<double>();
            }
    } else if (obj.contains("boresight")) {
        pose = Pose::facing(position, position + get_vec3(obj, ptr, "boresight"), up);
    } else if (obj.contains("target")) {
        pose = Pose::facing(position, get_vec3(obj, ptr, "target"), up);
    }
    try {
        pose.validate();
    } catch (const std::exception &e) {
        fail(ptr, e.what());
    }
    return pose;
}

Antenna parse_antenna(const json &obj, const std::string &ptr)
{
    require_keys(obj, ptr, {"position"}, {"gain", "pattern_exponent", "rotation", "boresight", "target", "up"});
    Antenna a;
    const Vec3d pos = get_vec3(obj, ptr, "position");
    a.pose = parse_pose(obj, ptr, pos);
    a.gain = obj.contains("gain") ? get_number(obj, ptr, "gain") : 1.0;
    a.pattern_exponent = obj.contains("pattern_exponent") ? get_number(obj, ptr, "pattern_exponent") : 0.0;
    try {
        a.validate();
    } catch (const std::exception &e) {
        fail(ptr, e.what());
    }
    return a;
}

UnitCell parse_unit(const json &obj, const std::string &ptr)
{
    require_keys(obj, ptr, {"size"}, {"amplitude", "bits", "phase_states"});
    if (obj.contains("bits") == obj.contains("phase_states"))
        fail(ptr, "give exactly one of bits/phase_states");
    const json &size = obj.at("size");
    if (!size.is_array() || size.size() != 2 || !size[0].is_number() || !size[1].is_number())
        fail(ptr + "/size", "expected an array of 2 numbers");
    UnitCell u;
    u.width_a = size[0].get<double>();
    u.height_b = size[1].get<double>();
    u.amplitude_response = obj.contains("amplitude") ? get_number(obj, ptr, "amplitude") : 1.0;
    if (obj.contains("bits")) {
        const int bits = get_int(obj, ptr, "bits");
        if (bits < 1 || bits > 3)
            fail(ptr + "/bits", "bits must be in [1, 3]");
        u = UnitCell::uniform(bits, u.width_a, u.height_b, u.amplitude_response);
    } else {
        const json &st = obj.at("phase_states");
        if (!st.is_array() || st.empty())
            fail(ptr + "/phase_states", "expected a non-empty array of radians");
        for (const json &v : st) {
            if (!v.is_number())
                fail(ptr + "/phase_states", "expected numbers");
            u.phase_states.push_back(v.get<double>());
        }
    }
    try {
        u.validate();
    } catch (const std::exception &e) {
        fail(ptr, e.what());
    }
    return u;
}

RisPanel parse_panel(const json &obj, const std::string &ptr)
{
    require_keys(obj, ptr, {"rows", "cols", "spacing", "unit", "position"},
                 {"rotation", "boresight", "target", "up"});
    RisPanel p;
    p.rows = get_int(obj, ptr, "rows");
    p.cols = get_int(obj, ptr, "cols");
    const json &sp = obj.at("spacing");
    if (!sp.is_array() || sp.size() != 2 || !sp[0].is_number() || !sp[1].is_number())
        fail(ptr + "/spacing", "expected an array of 2 numbers");
    p.spacing_x = sp[0].get<double>();
    p.spacing_y = sp[1].get<double>();
    p.unit = parse_unit(obj.at("unit"), ptr + "/unit");
    p.pose = parse_pose(obj, ptr, get_vec3(obj, ptr, "position"));
    try {
        p.validate();
    } catch (const std::exception &e) {
        fail(ptr, e.what());
    }
    return p;
}

} // namespace

ScenarioFile parse_scenario_json(const std::string &text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw scenario_error(line_col_of_byte(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
    }

    require_keys(doc, "", {"frequency_hz", "tx_power_dbm", "tx", "rx"},
                 {"noise_floor_dbm", "seed", "panels", "blockers"});

    ScenarioFile sf;
    Scenario &sc = sf.scenario;
    sc.frequency_hz = get_number(doc, "", "frequency_hz");
    sc.tx_power_dbm = get_number(doc, "", "tx_power_dbm");
    if (doc.contains("noise_floor_dbm"))
        sc.noise_floor_dbm = get_number(doc, "", "noise_floor_dbm");
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned())
            fail("/seed", "expected a non-negative integer");
        sf.seed = doc.at("seed").get<std::uint64_t>();
    }
    sc.tx = parse_antenna(doc.at("tx"), "/tx");
    sc.rx = parse_antenna(doc.at("rx"), "/rx");
    if (doc.contains("panels")) {
        if (!doc.at("panels").is_array())
            fail("/panels", "expected an array");
        int i = 0;
        for (const json &p : doc.at("panels"))
            sc.panels.push_back(parse_panel(p, "/panels/" + std::to_string(i++)));
    }
    if (doc.contains("blockers")) {
        if (!doc.at("blockers").is_array())
            fail("/blockers", "expected an array");
        int i = 0;
        for (const json &b : doc.at("blockers")) {
            const std::string ptr = "/blockers/" + std::to_string(i++);
            require_keys(b, ptr, {"lo", "hi"}, {});
            AxisAlignedBox box;
            box.lo = get_vec3(b, ptr, "lo");
            box.hi = get_vec3(b, ptr, "hi");
            try {
                box.validate();
            } catch (const std::exception &e) {
                fail(ptr, e.what());
            }
            sc.blockers.push_back(box);
        }
    }
    try {
        sc.validate();
    } catch (const std::exception &e) {
        fail("", e.what());
    }
    return sf;
}

ScenarioFile load_scenario(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw scenario_error(path, "cannot open scenario file");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_scenario_json(ss.str());
}

namespace
{

json pose_to_json(const Pose &pose)
{
    json r = json::array();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.push_back(pose.rotation(i, j));
    return r;
}

json antenna_to_json(const Antenna &a)
{
    return json{{"position", {a.pose.position.x(), a.pose.position.y(), a.pose.position.z()}},
                {"rotation", pose_to_json(a.pose)},
                {"gain", a.gain},
                {"pattern_exponent", a.pattern_exponent}};
}

} // namespace

std::string write_scenario_json(const ScenarioFile &sf)
{
    const Scenario &sc = sf.scenario;
    json doc{{"frequency_hz", sc.frequency_hz},
             {"tx_power_dbm", sc.tx_power_dbm},
             {"seed", sf.seed},
             {"tx", antenna_to_json(sc.tx)},
             {"rx", antenna_to_json(sc.rx)}};
    if (std::isfinite(sc.noise_floor_dbm))
        doc["noise_floor_dbm"] = sc.noise_floor_dbm;
    doc["panels"] = json::array();
    for (const RisPanel &p : sc.panels) {
        json unit{{"size", {p.unit.width_a, p.unit.height_b}},
                  {"amplitude", p.unit.amplitude_response},
                  {"phase_states", p.unit.phase_states}};
        doc["panels"].push_back(json{{"rows", p.rows},
                                     {"cols", p.cols},
                                     {"spacing", {p.spacing_x, p.spacing_y}},
                                     {"unit", unit},
                                     {"position", {p.pose.position.x(), p.pose.position.y(), p.pose.position.z()}},
                                     {"rotation", pose_to_json(p.pose)}});
    }
    doc["blockers"] = json::array();
    for (const AxisAlignedBox &b : sc.blockers)
        doc["blockers"].push_back(
            json{{"lo", {b.lo.x(), b.lo.y(), b.lo.z()}}, {"hi", {b.hi.x(), b.hi.y(), b.hi.z()}}});
    return doc.dump(2) + "\n";
}

void save_scenario(const std::string &path, const ScenarioFile &sf)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_scenario: cannot open '" + path + "'");
    os << write_scenario_json(sf);
}

} // namespace rissim
