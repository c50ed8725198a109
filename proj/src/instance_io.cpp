/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdmgs/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdmgs/error.hpp"

namespace sdmgs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& what) {
    throw Error(ErrorCode::parse_error, source + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where, const std::string& source) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, where + ": missing field '" + key + "'");
    return *it;
}

Vector numbers(const json& j, const std::string& where, const std::string& source) {
    if (!j.is_array()) fail(source, where + ": expected an array of numbers");
    Vector out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) fail(source, where + ": expected a number");
        out.push_back(v.get<double>());
    }
    return out;
}

Relation relation(const json& j, const std::string& where, const std::string& source) {
    const std::string rel = j.is_string() ? j.get<std::string>() : j.dump();
    if (rel == "<=") return Relation::less_equal;
    if (rel == ">=") return Relation::greater_equal;
    if (rel == "=" || rel == "==") return Relation::equal;
    fail(source, where + ": invalid relation '" + rel + "'");
}

BlockSpec parse_block(const json& b, std::size_t i, const std::string& source) {
    const std::string where = "block " + std::to_string(i);
    if (!b.is_object()) fail(source, where + ": expected an object");
    BlockSpec out;
    out.cost_linear = numbers(field(b, "cost_linear", where, source), where + " cost_linear", source);
    const std::size_t n = out.cost_linear.size();
    out.cost_quad_diag = b.contains("cost_quad_diag") ? numbers(b["cost_quad_diag"], where + " cost_quad_diag", source)
                                                      : Vector(n, 0.0);
    if (b.contains("cost_constant")) {
        if (!b["cost_constant"].is_number()) fail(source, where + " cost_constant: expected a number");
        out.cost_constant = b["cost_constant"].get<double>();
    }
    out.lower = numbers(field(b, "lb", where, source), where + " lb", source);
    out.upper = numbers(field(b, "ub", where, source), where + " ub", source);
    const json& ints = field(b, "integer", where, source);
    if (!ints.is_array()) fail(source, where + " integer: expected an array");
    for (const auto& v : ints) {
        if (v.is_boolean()) {
            out.integer.push_back(v.get<bool>());
        } else if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) {
            out.integer.push_back(v.get<int>() == 1);
        } else {
            fail(source, where + " integer: expected true/false or 0/1");
        }
    }
    const json& q = field(b, "Q", where, source);
    if (!q.is_array()) fail(source, where + " Q: expected an array of rows");
    for (std::size_t r = 0; r < q.size(); ++r) {
        out.coupling.push_back(numbers(q[r], where + " Q row " + std::to_string(r), source));
    }
    if (b.contains("constraints")) {
        const json& cs = b["constraints"];
        if (!cs.is_array()) fail(source, where + " constraints: expected an array");
        for (std::size_t c = 0; c < cs.size(); ++c) {
            const std::string cw = where + " constraint " + std::to_string(c);
            if (!cs[c].is_object()) fail(source, cw + ": expected an object");
            LinearConstraint lc;
            lc.coeffs = numbers(field(cs[c], "coeffs", cw, source), cw + " coeffs", source);
            lc.relation = relation(field(cs[c], "rel", cw, source), cw, source);
            const json& rhs = field(cs[c], "rhs", cw, source);
            if (!rhs.is_number()) fail(source, cw + " rhs: expected a number");
            lc.rhs = rhs.get<double>();
            out.constraints.push_back(std::move(lc));
        }
    }
    return out;
}

}  // namespace

ProblemInstance parse_instance_json(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t k = 0; k < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') ++line;
        }
        fail(source, "line " + std::to_string(line) + ": malformed JSON");
    }
    if (!doc.is_object()) fail(source, "top level must be an object");

    ProblemInstance inst;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail(source, "name: expected a string");
        inst.name = doc["name"].get<std::string>();
    }
    const json& blocks = field(doc, "blocks", "instance", source);
    if (!blocks.is_array()) fail(source, "blocks: expected an array");
    for (std::size_t i = 0; i < blocks.size(); ++i) inst.blocks.push_back(parse_block(blocks[i], i, source));
    const json& groups = field(doc, "groups", "instance", source);
    if (!groups.is_array()) fail(source, "groups: expected an array");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!groups[g].is_array()) fail(source, "group " + std::to_string(g) + ": expected an array");
        std::vector<std::size_t> members;
        for (const auto& v : groups[g]) {
            if (!v.is_number_unsigned()) fail(source, "group " + std::to_string(g) + ": expected coordinate indices");
            members.push_back(v.get<std::size_t>());
        }
        inst.linkage.groups.push_back(std::move(members));
    }

    const auto issues = validate_instance(inst);
    if (!issues.empty()) {
        std::string joined;
        for (const auto& s : issues) joined += (joined.empty() ? "" : "; ") + s;
        throw Error(ErrorCode::validation_error, source + ": " + joined);
    }
    return inst;
}

ProblemInstance parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str(), path);
}

std::string write_instance_json(const ProblemInstance& inst) {
    json doc;
    doc["name"] = inst.name;
    doc["blocks"] = json::array();
    for (const auto& b : inst.blocks) {
        json jb;
        jb["cost_linear"] = b.cost_linear;
        jb["cost_quad_diag"] = b.cost_quad_diag;
        jb["cost_constant"] = b.cost_constant;
        jb["constraints"] = json::array();
        for (const auto& c : b.constraints) {
            const char* rel = c.relation == Relation::less_equal ? "<=" : c.relation == Relation::equal ? "=" : ">=";
            jb["constraints"].push_back({{"coeffs", c.coeffs}, {"rel", rel}, {"rhs", c.rhs}});
        }
        jb["lb"] = b.lower;
        jb["ub"] = b.upper;
        jb["integer"] = json::array();
        for (bool v : b.integer) jb["integer"].push_back(v);
        jb["Q"] = b.coupling;
        doc["blocks"].push_back(std::move(jb));
    }
    doc["groups"] = inst.linkage.groups;
    return doc.dump(1) + "\n";
}

void write_instance(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
    out << write_instance_json(inst);
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path);
}

}  // namespace sdmgs
