#pragma once

// CSV instance directories and CSV report files.
//
// An instance directory holds one CSV per table, each with a header line:
//   nodes.csv          id,kind,origin,destination,rail      kind = county|port
//   arcs.csv           from,to,mode,miles[,cost_per_ton]    blank cost = rate schedule
//   rates.csv          mode,fixed_per_ton,per_ton_mile
//   equipment.csv      id,unit_cost,unit_capacity
//   storage.csv        id,unit_cost,unit_capacity
//   commodities.csv    id,holding_cost
//   compat.csv         type,kind,commodity,norm             type = equipment|storage
//   capacities.csv     port,type,kind,tons                  existing tonnage
//   scenarios.csv      id,probability
//   volumes.csv        scenario,county,commodity,period,supply,demand
//   params.csv         key,value                            periods, budget, shortage_penalty, enforce_storage_ratio
// and optionally
//   groups.csv         group,equipment                      shared handling capacity
//   group_capacity.csv group,port,tons
//   storage_ratio.csv  storage,equipment,ratio

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wsn/analysis.hpp"
#include "wsn/model.hpp"

namespace wsn {

namespace fs = std::filesystem;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, int column, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        file_(std::move(file)),
        line_(line),
        column_(column) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

// ----- CSV primitives -----

class CsvTable {
 public:
  struct Row {
    int line = 0;
    std::vector<std::string> fields;
  };

  static CsvTable read(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.filename().string(), 0, 0, "cannot open " + path.string());
    CsvTable t;
    t.name_ = path.filename().string();
    std::string line;
    int n = 0;
    bool header = true;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto fields = split(line);
      if (header) {
        t.header_ = std::move(fields);
        t.header_line_ = n;
        header = false;
        continue;
      }
      if (fields.size() != t.header_.size()) {
        throw ParseError(t.name_, n, static_cast<int>(std::min(fields.size(), t.header_.size())) + 1,
                         "expected " + std::to_string(t.header_.size()) + " fields, found " + std::to_string(fields.size()));
      }
      t.rows_.push_back({n, std::move(fields)});
    }
    if (header) throw ParseError(t.name_, n, 0, "missing header line");
    return t;
  }

  const std::string& name() const { return name_; }
  const std::vector<Row>& rows() const { return rows_; }

  int column(const std::string& key) const {
    for (std::size_t k = 0; k < header_.size(); ++k) {
      if (header_[k] == key) return static_cast<int>(k);
    }
    throw ParseError(name_, header_line_, 0, "missing column '" + key + "'");
  }
  std::optional<int> optional_column(const std::string& key) const {
    for (std::size_t k = 0; k < header_.size(); ++k) {
      if (header_[k] == key) return static_cast<int>(k);
    }
    return std::nullopt;
  }

  const std::string& text(const Row& r, int col) const {
    if (r.fields[col].empty()) fail(r, col, "empty " + header_[col]);
    return r.fields[col];
  }
  double number(const Row& r, int col) const {
    const std::string& s = text(r, col);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      fail(r, col, header_[col] + " is not a number: '" + s + "'");
    }
    return v;
  }
  int integer(const Row& r, int col) const {
    const std::string& s = text(r, col);
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail(r, col, header_[col] + " is not an integer: '" + s + "'");
    return v;
  }
  bool flag(const Row& r, int col) const {
    const std::string& s = text(r, col);
    if (s == "1") return true;
    if (s == "0") return false;
    fail(r, col, header_[col] + " must be 0 or 1, found '" + s + "'");
  }
  [[noreturn]] void fail(const Row& r, int col, const std::string& msg) const {
    throw ParseError(name_, r.line, col + 1, msg);
  }

  static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        out.push_back(trim(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(trim(cur));
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
  }

  std::string name_;
  int header_line_ = 0;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

/// Shortest text that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  std::to_chars_result r;
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  } else {
    r = std::to_chars(buf, buf + sizeof buf, v);
  }
  return std::string(buf, r.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) out_ << (k ? "," : "") << fields[k];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

// ----- instance directories -----

struct InstanceFileSet {
  fs::path dir;
  fs::path nodes() const { return dir / "nodes.csv"; }
  fs::path arcs() const { return dir / "arcs.csv"; }
  fs::path rates() const { return dir / "rates.csv"; }
  fs::path equipment() const { return dir / "equipment.csv"; }
  fs::path storage() const { return dir / "storage.csv"; }
  fs::path commodities() const { return dir / "commodities.csv"; }
  fs::path compat() const { return dir / "compat.csv"; }
  fs::path capacities() const { return dir / "capacities.csv"; }
  fs::path groups() const { return dir / "groups.csv"; }
  fs::path group_capacity() const { return dir / "group_capacity.csv"; }
  fs::path storage_ratio() const { return dir / "storage_ratio.csv"; }
  fs::path scenarios() const { return dir / "scenarios.csv"; }
  fs::path volumes() const { return dir / "volumes.csv"; }
  fs::path params() const { return dir / "params.csv"; }
};

namespace detail {

inline Mode parse_mode(const CsvTable& t, const CsvTable::Row& r, int col) {
  const auto& s = t.text(r, col);
  if (s == "truck") return Mode::Truck;
  if (s == "rail") return Mode::Rail;
  if (s == "barge") return Mode::Barge;
  t.fail(r, col, "unknown mode '" + s + "'");
}

inline int lookup(const CsvTable& t, const CsvTable::Row& r, int col, const std::vector<std::string>& ids,
                  const char* what, const std::string& context = "") {
  const auto& s = t.text(r, col);
  const int k = find_id(ids, s);
  if (k < 0) t.fail(r, col, std::string("unknown ") + what + " '" + s + "'" + context);
  return k;
}

inline std::vector<std::string> read_ids(const CsvTable& t, const char* what) {
  std::vector<std::string> ids;
  const int c = t.column("id");
  for (const auto& r : t.rows()) {
    const auto& id = t.text(r, c);
    if (find_id(ids, id) >= 0) t.fail(r, c, std::string("duplicate ") + what + " '" + id + "'");
    ids.push_back(id);
  }
  if (ids.empty()) throw ParseError(t.name(), 0, 0, std::string("no ") + what + " declared");
  return ids;
}

}  // namespace detail

inline Instance load_instance(const InstanceFileSet& files) {
  Instance inst;
  auto& S = inst.sets;
  auto& K = inst.costs;
  auto& A = inst.caps;

  // Nodes.
  {
    const auto t = CsvTable::read(files.nodes());
    const int cid = t.column("id"), ckind = t.column("kind"), corig = t.column("origin"), cdest = t.column("destination"),
              crail = t.column("rail");
    std::set<std::string> seen;
    std::vector<char> prail, crl;
    for (const auto& r : t.rows()) {
      const auto& id = t.text(r, cid);
      if (!seen.insert(id).second) t.fail(r, cid, "duplicate node '" + id + "'");
      const auto& kind = t.text(r, ckind);
      const bool o = t.flag(r, corig), d = t.flag(r, cdest), rail = t.flag(r, crail);
      if (kind == "port") {
        if (o) S.origin_ports.push_back(S.num_ports());
        if (d) S.destination_ports.push_back(S.num_ports());
        S.ports.push_back(id);
        prail.push_back(rail);
      } else if (kind == "county") {
        if (o) S.origin_counties.push_back(S.num_counties());
        if (d) S.destination_counties.push_back(S.num_counties());
        S.counties.push_back(id);
        crl.push_back(rail);
      } else {
        t.fail(r, ckind, "node kind must be county or port, found '" + kind + "'");
      }
    }
    A.port_rail = prail;
    A.county_rail = crl;
  }

  // Rates.
  {
    const auto t = CsvTable::read(files.rates());
    const int cm = t.column("mode"), cf = t.column("fixed_per_ton"), cr = t.column("per_ton_mile");
    std::set<Mode> seen;
    for (const auto& r : t.rows()) {
      const Mode m = detail::parse_mode(t, r, cm);
      if (!seen.insert(m).second) t.fail(r, cm, std::string("duplicate rate for ") + mode_name(m));
      const RateSchedule rs{t.number(r, cf), t.number(r, cr)};
      (m == Mode::Truck ? K.truck_rate : m == Mode::Rail ? K.rail_rate : K.barge_rate) = rs;
    }
    for (Mode m : {Mode::Truck, Mode::Rail, Mode::Barge}) {
      if (!seen.count(m)) throw ParseError(t.name(), 0, 0, std::string("missing rate for ") + mode_name(m));
    }
  }

  // Arcs.
  {
    const auto t = CsvTable::read(files.arcs());
    const int cf = t.column("from"), ct = t.column("to"), cm = t.column("mode"), cmi = t.column("miles");
    const auto ccost = t.optional_column("cost_per_ton");
    for (const auto& r : t.rows()) {
      const auto& a = t.text(r, cf);
      const auto& b = t.text(r, ct);
      const Mode m = detail::parse_mode(t, r, cm);
      const double miles = t.number(r, cmi);
      const auto& rate = m == Mode::Truck ? K.truck_rate : m == Mode::Rail ? K.rail_rate : K.barge_rate;
      const double cost = ccost && !r.fields[*ccost].empty() ? t.number(r, *ccost) : rate.cost(miles);
      const int ja = find_id(S.counties, a), jb = find_id(S.counties, b);
      const int ia = find_id(S.ports, a), ib = find_id(S.ports, b);
      const std::string ctx = " (arc " + a + "-" + b + ")";
      if (ja < 0 && ia < 0) t.fail(r, cf, "unknown node '" + a + "'" + ctx);
      if (jb < 0 && ib < 0) t.fail(r, ct, "unknown node '" + b + "'" + ctx);
      if (ja >= 0 && jb >= 0) {
        K.county_county.push_back({ja, jb, m, miles, cost});
      } else if (ia >= 0 && ib >= 0) {
        K.port_port.push_back({ia, ib, m, miles, cost});
      } else if (ja >= 0) {
        K.county_port.push_back({ja, ib, m, miles, cost});
      } else {
        K.county_port.push_back({jb, ia, m, miles, cost});
      }
    }
  }

  // Equipment, storage, commodities.
  auto kinds = [&](const fs::path& p, const char* what, std::vector<std::string>& ids, std::vector<double>& cost,
                   std::vector<double>* cap) {
    const auto t = CsvTable::read(p);
    ids = detail::read_ids(t, what);
    const int cc = t.column(cap ? "unit_cost" : "holding_cost");
    const int ck = cap ? t.column("unit_capacity") : -1;
    for (const auto& r : t.rows()) {
      cost.push_back(t.number(r, cc));
      if (cap) cap->push_back(t.number(r, ck));
    }
  };
  kinds(files.equipment(), "equipment kind", S.equipment_kinds, K.equipment_cost, &A.equip_capacity);
  kinds(files.storage(), "storage kind", S.storage_kinds, K.storage_cost, &A.storage_capacity);
  kinds(files.commodities(), "commodity", S.commodities, K.holding_cost, nullptr);
  const int I = S.num_ports(), C = S.num_commodities(), E = S.num_equipment(), F = S.num_storage();

  // Compatibility and normalized tonnage.
  A.equip_compat.assign(static_cast<std::size_t>(E) * C, 0);
  A.processing_norm.assign(static_cast<std::size_t>(E) * C, 0.0);
  A.storage_compat.assign(static_cast<std::size_t>(F) * C, 0);
  A.storage_norm.assign(static_cast<std::size_t>(F) * C, 0.0);
  {
    const auto t = CsvTable::read(files.compat());
    const int cty = t.column("type"), ck = t.column("kind"), cc = t.column("commodity"), cn = t.column("norm");
    for (const auto& r : t.rows()) {
      const auto& type = t.text(r, cty);
      const int c = detail::lookup(t, r, cc, S.commodities, "commodity");
      const double norm = t.number(r, cn);
      if (!(norm > 0.0)) t.fail(r, cn, "norm must be > 0 for a compatible pair");
      std::size_t k;
      if (type == "equipment") {
        k = static_cast<std::size_t>(detail::lookup(t, r, ck, S.equipment_kinds, "equipment kind")) * C + c;
        if (A.equip_compat[k]) t.fail(r, ck, "duplicate compatibility row");
        A.equip_compat[k] = 1;
        A.processing_norm[k] = norm;
      } else if (type == "storage") {
        k = static_cast<std::size_t>(detail::lookup(t, r, ck, S.storage_kinds, "storage kind")) * C + c;
        if (A.storage_compat[k]) t.fail(r, ck, "duplicate compatibility row");
        A.storage_compat[k] = 1;
        A.storage_norm[k] = norm;
      } else {
        t.fail(r, cty, "type must be equipment or storage, found '" + type + "'");
      }
    }
  }
  A.storage_ratio.assign(static_cast<std::size_t>(F) * E, 0.0);
  if (fs::exists(files.storage_ratio())) {
    const auto t = CsvTable::read(files.storage_ratio());
    const int cs = t.column("storage"), ce = t.column("equipment"), cr = t.column("ratio");
    for (const auto& r : t.rows()) {
      const int f = detail::lookup(t, r, cs, S.storage_kinds, "storage kind");
      const int e = detail::lookup(t, r, ce, S.equipment_kinds, "equipment kind");
      A.storage_ratio[static_cast<std::size_t>(f) * E + e] = t.number(r, cr);
    }
  }

  // Existing capacity.
  A.existing_equipment_tons.assign(static_cast<std::size_t>(I) * E, 0.0);
  A.existing_storage_tons.assign(static_cast<std::size_t>(I) * F, 0.0);
  {
    const auto t = CsvTable::read(files.capacities());
    const int cp = t.column("port"), cty = t.column("type"), ck = t.column("kind"), ct = t.column("tons");
    for (const auto& r : t.rows()) {
      const int i = detail::lookup(t, r, cp, S.ports, "port");
      const auto& type = t.text(r, cty);
      const double tons = t.number(r, ct);
      if (type == "equipment") {
        const int e = detail::lookup(t, r, ck, S.equipment_kinds, "equipment kind", " at port " + S.ports[i]);
        A.existing_equipment_tons[static_cast<std::size_t>(i) * E + e] += tons;
      } else if (type == "storage") {
        const int f = detail::lookup(t, r, ck, S.storage_kinds, "storage kind", " at port " + S.ports[i]);
        A.existing_storage_tons[static_cast<std::size_t>(i) * F + f] += tons;
      } else {
        t.fail(r, cty, "type must be equipment or storage, found '" + type + "'");
      }
    }
  }
  if (fs::exists(files.groups())) {
    const auto t = CsvTable::read(files.groups());
    const int cg = t.column("group"), ce = t.column("equipment");
    for (const auto& r : t.rows()) {
      const auto& g = t.text(r, cg);
      const int e = detail::lookup(t, r, ce, S.equipment_kinds, "equipment kind", " in group " + g);
      auto it = std::find_if(A.handling_groups.begin(), A.handling_groups.end(), [&](const auto& h) { return h.id == g; });
      if (it == A.handling_groups.end()) {
        A.handling_groups.push_back({g, {}, std::vector<double>(I, 0.0)});
        it = A.handling_groups.end() - 1;
      }
      if (std::find(it->members.begin(), it->members.end(), e) != it->members.end()) t.fail(r, ce, "duplicate group member");
      it->members.push_back(e);
    }
    if (fs::exists(files.group_capacity())) {
      const auto tc = CsvTable::read(files.group_capacity());
      const int cgg = tc.column("group"), cp = tc.column("port"), ct = tc.column("tons");
      for (const auto& r : tc.rows()) {
        const auto& g = tc.text(r, cgg);
        auto it = std::find_if(A.handling_groups.begin(), A.handling_groups.end(), [&](const auto& h) { return h.id == g; });
        if (it == A.handling_groups.end()) tc.fail(r, cgg, "unknown handling group '" + g + "'");
        const int i = detail::lookup(tc, r, cp, S.ports, "port", " in group " + g);
        it->port_tons[i] += tc.number(r, ct);
      }
    }
  } else if (fs::exists(files.group_capacity())) {
    throw ParseError(files.group_capacity().filename().string(), 0, 0, "group capacities given without groups.csv");
  }

  // Parameters.
  std::optional<double> penalty;
  {
    const auto t = CsvTable::read(files.params());
    const int ck = t.column("key"), cv = t.column("value");
    std::set<std::string> seen;
    for (const auto& r : t.rows()) {
      const auto& key = t.text(r, ck);
      if (!seen.insert(key).second) t.fail(r, ck, "duplicate parameter '" + key + "'");
      if (key == "periods") {
        S.periods = t.integer(r, cv);
        if (S.periods < 1) t.fail(r, cv, "periods must be >= 1");
      } else if (key == "budget") {
        K.budget = t.number(r, cv);
      } else if (key == "shortage_penalty") {
        penalty = t.number(r, cv);
      } else if (key == "enforce_storage_ratio") {
        inst.enforce_storage_ratio = t.flag(r, cv);
      } else {
        t.fail(r, ck, "unknown parameter '" + key + "'");
      }
    }
    if (!seen.count("periods")) throw ParseError(t.name(), 0, 0, "missing parameter 'periods'");
  }
  K.shortage_penalty = penalty ? *penalty : default_shortage_penalty(K.county_county, K.county_port);

  // Scenarios.
  {
    const auto t = CsvTable::read(files.scenarios());
    S.scenarios = detail::read_ids(t, "scenario");
    const int cp = t.column("probability");
    for (const auto& r : t.rows()) {
      ScenarioData sc;
      sc.probability = t.number(r, cp);
      inst.scenarios.push_back(std::move(sc));
    }
  }
  const std::size_t cp = static_cast<std::size_t>(S.num_counties()) * C * S.periods;
  for (auto& sc : inst.scenarios) {
    sc.supply.assign(cp, 0.0);
    sc.demand.assign(cp, 0.0);
  }
  {
    const auto t = CsvTable::read(files.volumes());
    const int cs = t.column("scenario"), cj = t.column("county"), cc = t.column("commodity"), cpp = t.column("period");
    const int cq = t.column("supply"), cd = t.column("demand");
    std::vector<char> seen(cp * S.num_scenarios(), 0);
    for (const auto& r : t.rows()) {
      const int s = detail::lookup(t, r, cs, S.scenarios, "scenario");
      const int j = detail::lookup(t, r, cj, S.counties, "county");
      const int c = detail::lookup(t, r, cc, S.commodities, "commodity");
      const int p = t.integer(r, cpp);
      if (p < 1 || p > S.periods) t.fail(r, cpp, "period " + std::to_string(p) + " outside 1.." + std::to_string(S.periods));
      const std::size_t k = inst.cp_index(j, c, p);
      if (seen[s * cp + k]) t.fail(r, cs, "duplicate volume row");
      seen[s * cp + k] = 1;
      inst.scenarios[s].supply[k] = t.number(r, cq);
      inst.scenarios[s].demand[k] = t.number(r, cd);
    }
  }
  require_valid(inst);
  return inst;
}

inline Instance load_instance(const fs::path& dir) { return load_instance(InstanceFileSet{dir}); }

inline void save_instance(const Instance& inst, const fs::path& dir) {
  fs::create_directories(dir);
  const InstanceFileSet files{dir};
  const auto& S = inst.sets;
  const auto& K = inst.costs;
  const auto& A = inst.caps;
  const int I = S.num_ports(), J = S.num_counties(), C = inst.C(), E = inst.E(), F = inst.F();
  auto num = format_number;
  auto member = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end() ? "1" : "0"; };
  {
    CsvWriter w(files.nodes(), {"id", "kind", "origin", "destination", "rail"});
    for (int j = 0; j < J; ++j) {
      w.row({S.counties[j], "county", member(S.origin_counties, j), member(S.destination_counties, j), A.county_rail[j] ? "1" : "0"});
    }
    for (int i = 0; i < I; ++i) {
      w.row({S.ports[i], "port", member(S.origin_ports, i), member(S.destination_ports, i), A.port_rail[i] ? "1" : "0"});
    }
  }
  {
    CsvWriter w(files.rates(), {"mode", "fixed_per_ton", "per_ton_mile"});
    w.row({"truck", num(K.truck_rate.fixed_per_ton), num(K.truck_rate.per_ton_mile)});
    w.row({"rail", num(K.rail_rate.fixed_per_ton), num(K.rail_rate.per_ton_mile)});
    w.row({"barge", num(K.barge_rate.fixed_per_ton), num(K.barge_rate.per_ton_mile)});
  }
  {
    CsvWriter w(files.arcs(), {"from", "to", "mode", "miles", "cost_per_ton"});
    auto row = [&](const std::string& a, const std::string& b, const Link& l) {
      const auto& rate = l.mode == Mode::Truck ? K.truck_rate : l.mode == Mode::Rail ? K.rail_rate : K.barge_rate;
      w.row({a, b, mode_name(l.mode), num(l.miles), rate.cost(l.miles) == l.cost_per_ton ? "" : num(l.cost_per_ton)});
    };
    for (const auto& l : K.county_port) row(S.counties[l.a], S.ports[l.b], l);
    for (const auto& l : K.port_port) row(S.ports[l.a], S.ports[l.b], l);
    for (const auto& l : K.county_county) row(S.counties[l.a], S.counties[l.b], l);
  }
  {
    CsvWriter w(files.equipment(), {"id", "unit_cost", "unit_capacity"});
    for (int e = 0; e < E; ++e) w.row({S.equipment_kinds[e], num(K.equipment_cost[e]), num(A.equip_capacity[e])});
  }
  {
    CsvWriter w(files.storage(), {"id", "unit_cost", "unit_capacity"});
    for (int f = 0; f < F; ++f) w.row({S.storage_kinds[f], num(K.storage_cost[f]), num(A.storage_capacity[f])});
  }
  {
    CsvWriter w(files.commodities(), {"id", "holding_cost"});
    for (int c = 0; c < C; ++c) w.row({S.commodities[c], num(K.holding_cost[c])});
  }
  {
    CsvWriter w(files.compat(), {"type", "kind", "commodity", "norm"});
    for (int e = 0; e < E; ++e)
      for (int c = 0; c < C; ++c)
        if (inst.equip_ok(e, c)) w.row({"equipment", S.equipment_kinds[e], S.commodities[c], num(inst.lambda(e, c))});
    for (int f = 0; f < F; ++f)
      for (int c = 0; c < C; ++c)
        if (inst.storage_ok(f, c)) w.row({"storage", S.storage_kinds[f], S.commodities[c], num(inst.zeta(f, c))});
  }
  if (std::any_of(A.storage_ratio.begin(), A.storage_ratio.end(), [](double v) { return v != 0.0; })) {
    CsvWriter w(files.storage_ratio(), {"storage", "equipment", "ratio"});
    for (int f = 0; f < F; ++f)
      for (int e = 0; e < E; ++e)
        if (A.storage_ratio[f * E + e] != 0.0) w.row({S.storage_kinds[f], S.equipment_kinds[e], num(A.storage_ratio[f * E + e])});
  } else {
    fs::remove(files.storage_ratio());
  }
  {
    CsvWriter w(files.capacities(), {"port", "type", "kind", "tons"});
    for (int i = 0; i < I; ++i) {
      for (int e = 0; e < E; ++e) {
        const double v = A.existing_equipment_tons[i * E + e];
        if (v != 0.0) w.row({S.ports[i], "equipment", S.equipment_kinds[e], num(v)});
      }
      for (int f = 0; f < F; ++f) {
        const double v = A.existing_storage_tons[i * F + f];
        if (v != 0.0) w.row({S.ports[i], "storage", S.storage_kinds[f], num(v)});
      }
    }
  }
  if (!A.handling_groups.empty()) {
    CsvWriter g(files.groups(), {"group", "equipment"});
    CsvWriter gc(files.group_capacity(), {"group", "port", "tons"});
    for (const auto& h : A.handling_groups) {
      for (int e : h.members) g.row({h.id, S.equipment_kinds[e]});
      for (int i = 0; i < I; ++i)
        if (h.port_tons[i] != 0.0) gc.row({h.id, S.ports[i], num(h.port_tons[i])});
    }
  } else {
    fs::remove(files.groups());
    fs::remove(files.group_capacity());
  }
  {
    CsvWriter w(files.params(), {"key", "value"});
    w.row({"periods", std::to_string(S.periods)});
    w.row({"budget", num(K.budget)});
    w.row({"shortage_penalty", num(K.shortage_penalty)});
    w.row({"enforce_storage_ratio", inst.enforce_storage_ratio ? "1" : "0"});
  }
  {
    CsvWriter w(files.scenarios(), {"id", "probability"});
    for (int s = 0; s < S.num_scenarios(); ++s) w.row({S.scenarios[s], num(inst.scenarios[s].probability)});
  }
  {
    CsvWriter w(files.volumes(), {"scenario", "county", "commodity", "period", "supply", "demand"});
    for (int s = 0; s < S.num_scenarios(); ++s)
      for (int j = 0; j < J; ++j)
        for (int c = 0; c < C; ++c)
          for (int p = 1; p <= S.periods; ++p) {
            const double q = inst.supply(s, j, c, p), d = inst.demand(s, j, c, p);
            if (q != 0.0 || d != 0.0) w.row({S.scenarios[s], S.counties[j], S.commodities[c], std::to_string(p), num(q), num(d)});
          }
  }
}

// ----- report files -----

inline void write_trace_csv(const BendersTrace& t, const fs::path& path) {
  CsvWriter w(path, {"n", "LB", "UB", "gap", "seconds"});
  for (const auto& r : t.iterations) {
    w.row({std::to_string(r.n), format_number(r.lb), format_number(r.ub), format_number(r.gap), format_number(r.elapsed_seconds)});
  }
}

inline void write_investments_csv(const std::vector<InvestmentLine>& lines, const Instance& inst, const fs::path& path) {
  CsvWriter w(path, {"port", "type", "kind", "units", "cost"});
  for (const auto& l : lines) {
    w.row({inst.sets.ports[l.port], l.storage ? "storage" : "equipment",
           l.storage ? inst.sets.storage_kinds[l.kind] : inst.sets.equipment_kinds[l.kind], std::to_string(l.units),
           format_number(l.cost)});
  }
}

/// flows.csv: tons and ton-miles per scenario (and "expected"), mode, commodity.
/// service.csv: demand, deliveries by waterway and direct, and shortage.
inline void write_flow_report(const FlowReport& rep, const Instance& inst, const fs::path& dir) {
  CsvWriter f(dir / "flows.csv", {"scenario", "mode", "commodity", "tons", "ton_miles"});
  CsvWriter s(dir / "service.csv", {"scenario", "commodity", "demand", "waterway", "direct", "shortage"});
  const int C = inst.C();
  auto emit = [&](const std::string& sid, const FlowSummary& sum) {
    for (Mode m : {Mode::Truck, Mode::Rail, Mode::Barge})
      for (int c = 0; c < C; ++c) {
        const auto& leg = sum.legs[static_cast<std::size_t>(m) * C + c];
        f.row({sid, mode_name(m), inst.sets.commodities[c], format_number(leg.tons), format_number(leg.ton_miles)});
      }
    for (int c = 0; c < C; ++c) {
      s.row({sid, inst.sets.commodities[c], format_number(sum.demand[c]), format_number(sum.delivered_by_waterway[c]),
             format_number(sum.delivered_direct[c]), format_number(sum.shortage[c])});
    }
  };
  for (std::size_t k = 0; k < rep.per_scenario.size(); ++k) emit(inst.sets.scenarios[k], rep.per_scenario[k]);
  emit("expected", rep.expected);
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const fs::path& path) {
  CsvWriter w(path, {"budget", "total_cost", "investment", "expected_recourse", "unit_cost", "truck_ton_miles",
                     "rail_ton_miles", "barge_ton_miles", "barge_tons", "gap", "iterations", "converged", "seconds"});
  for (const auto& r : rows) {
    w.row({format_number(r.budget), format_number(r.total_cost), format_number(r.investment),
           format_number(r.expected_recourse), format_number(r.unit_cost),
           format_number(r.flows.expected.mode(Mode::Truck).ton_miles), format_number(r.flows.expected.mode(Mode::Rail).ton_miles),
           format_number(r.flows.expected.mode(Mode::Barge).ton_miles), format_number(r.flows.expected.mode(Mode::Barge).tons),
           format_number(r.gap), std::to_string(r.iterations), r.converged ? "1" : "0", format_number(r.seconds)});
  }
}

inline void write_stochastic_csv(const StochasticValueReport& r, const Instance& inst, const fs::path& path) {
  CsvWriter w(path, {"scenario", "probability", "wait_and_see"});
  for (std::size_t s = 0; s < r.ws_per_scenario.size(); ++s) {
    w.row({inst.sets.scenarios[s], format_number(inst.scenarios[s].probability), format_number(r.ws_per_scenario[s])});
  }
}

}  // namespace wsn
