#include "regkit/json_io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace regkit {

namespace {

void write_escaped(std::ostream& out, const std::string& s) {
    out << '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\t': out << "\\t"; break;
            case '\r': out << "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out << buf;
                } else {
                    out << ch;
                }
        }
    }
    out << '"';
}

void write_value(std::ostream& out, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { out << "{}"; return; }
            out << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << pad_in;
                write_escaped(out, it.key());
                out << ": ";
                write_value(out, it.value(), indent, depth + 1);
            }
            out << '\n' << pad << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { out << "[]"; return; }
            out << "[\n";
            bool first = true;
            for (const auto& item : j) {
                if (!first) out << ",\n";
                first = false;
                out << pad_in;
                write_value(out, item, indent, depth + 1);
            }
            out << '\n' << pad << ']';
            return;
        }
        case Json::value_t::string:
            write_escaped(out, j.get_ref<const std::string&>());
            return;
        case Json::value_t::boolean:
            out << (j.get<bool>() ? "true" : "false");
            return;
        case Json::value_t::number_integer:
            out << j.get<std::int64_t>();
            return;
        case Json::value_t::number_unsigned:
            out << j.get<std::uint64_t>();
            return;
        case Json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out << buf;
            return;
        }
        default:
            out << "null";
            return;
    }
}

} // namespace

void write_json(std::ostream& out, const Json& j, int indent) {
    write_value(out, j, indent, 0);
    out << '\n';
}

std::string json_to_string(const Json& j, int indent) {
    std::ostringstream os;
    write_json(os, j, indent);
    return os.str();
}

Json trace_to_json(const RegularityResult& result) {
    Json j;
    j["mode"] = result.mode;
    j["epsilon"] = result.epsilon;
    j["f_spec"] = result.f_spec;
    Json rounds = Json::array();
    for (const RoundRecord& r : result.trace.rounds) {
        Json jr;
        jr["potential_before"] = r.potential_before;
        jr["potential_after"] = r.potential_after;
        jr["atoms_added"] = r.atoms_added;
        jr["rank_after"] = r.rank_after;
        jr["q_magnitude"] = r.q_magnitude;
        rounds.push_back(std::move(jr));
    }
    j["rounds"] = std::move(rounds);
    j["k_witness"] = result.k_witness;
    j["halting_certificate"] =
        result.halting_certificate == HaltingCertificate::Exact ? "exact" : "greedy";
    return j;
}

Json partition_to_json(const Partition& p) {
    const auto members = p.parts();
    Json arr = Json::array();
    if (p.exceptional) arr.push_back(members[*p.exceptional]);
    for (int i = 0; i < p.part_count; ++i) {
        if (p.exceptional && *p.exceptional == i) continue;
        arr.push_back(members[i]);
    }
    return arr;
}

Json checks_to_json(const std::vector<CheckResult>& checks) {
    Json arr = Json::array();
    for (const CheckResult& c : checks) {
        Json jc;
        jc["name"] = c.name;
        jc["measured"] = c.measured;
        jc["bound"] = c.bound;
        if (c.bound_saturated) jc["bound_saturated"] = true;
        jc["pass"] = c.pass;
        arr.push_back(std::move(jc));
    }
    return arr;
}

Json report_to_json(const DiscrepancyReport& report) {
    Json j;
    Json pairs = Json::array();
    for (const PairDiscrepancy& pd : report.pairs) {
        Json jp;
        jp["i"] = pd.i;
        jp["j"] = pd.j;
        jp["size_i"] = pd.size_i;
        jp["size_j"] = pd.size_j;
        jp["disc"] = pd.disc;
        jp["irregular"] = pd.irregular;
        pairs.push_back(std::move(jp));
    }
    j["pairs"] = std::move(pairs);
    j["disc_sum_ordered"] = report.disc_sum_ordered;
    j["flag_eps"] = report.flag_eps;
    j["checks"] = checks_to_json(report.checks);
    return j;
}

} // namespace regkit
