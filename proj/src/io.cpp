#include "ocevi/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ocevi {

Json mdp_to_json(const TabularMdp& mdp) {
  Json P = Json::array(), r = Json::array();
  for (int h = 0; h < mdp.H; ++h) {
    Json Ph = Json::array(), rh = Json::array();
    for (int s = 0; s < mdp.S; ++s) {
      Json Phs = Json::array(), rhs = Json::array();
      for (int a = 0; a < mdp.A; ++a) {
        const auto row = mdp.transition(h, s, a);
        Phs.push_back(std::vector<double>(row.data(), row.data() + row.size()));
        rhs.push_back(mdp.reward(h, s, a));
      }
      Ph.push_back(std::move(Phs));
      rh.push_back(std::move(rhs));
    }
    P.push_back(std::move(Ph));
    r.push_back(std::move(rh));
  }
  Json doc = {{"S", mdp.S}, {"A", mdp.A}, {"H", mdp.H}, {"s_init", mdp.initial_state},
              {"P", std::move(P)}, {"r", std::move(r)}};
  if (!mdp.state_names.empty()) doc["state_names"] = mdp.state_names;
  if (!mdp.action_names.empty()) doc["action_names"] = mdp.action_names;
  return doc;
}

namespace {

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name))
    throw std::invalid_argument(std::string("MDP document is missing field '") + name + "'");
  return doc.at(name);
}

void expect_size(const Json& node, std::size_t n, const std::string& where) {
  if (!node.is_array() || node.size() != n)
    throw std::invalid_argument(where + " must be an array of length " + std::to_string(n));
}

}  // namespace

TabularMdp mdp_from_json(const Json& doc) {
  try {
    const int S = field(doc, "S").get<int>();
    const int A = field(doc, "A").get<int>();
    const int H = field(doc, "H").get<int>();
    TabularMdp mdp = TabularMdp::zeros(S, A, H);
    mdp.initial_state = doc.value("s_init", 0);
    const Json& P = field(doc, "P");
    const Json& r = field(doc, "r");
    expect_size(P, H, "P");
    expect_size(r, H, "r");
    for (int h = 0; h < H; ++h) {
      expect_size(P[h], S, "P[" + std::to_string(h) + "]");
      expect_size(r[h], S, "r[" + std::to_string(h) + "]");
      for (int s = 0; s < S; ++s) {
        const std::string where = "[" + std::to_string(h) + "][" + std::to_string(s) + "]";
        expect_size(P[h][s], A, "P" + where);
        expect_size(r[h][s], A, "r" + where);
        for (int a = 0; a < A; ++a) {
          expect_size(P[h][s][a], S, "P" + where + "[" + std::to_string(a) + "]");
          for (int t = 0; t < S; ++t) mdp.transition(h, s, a)[t] = P[h][s][a][t].get<double>();
          mdp.rewards[h](s, a) = r[h][s][a].get<double>();
        }
      }
    }
    if (doc.contains("state_names"))
      mdp.state_names = doc.at("state_names").get<std::vector<std::string>>();
    if (doc.contains("action_names"))
      mdp.action_names = doc.at("action_names").get<std::vector<std::string>>();
    return mdp;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed MDP document: ") + e.what());
  }
}

Json policy_to_json(const Policy& policy) {
  Json actions = Json::array();
  for (Eigen::Index h = 0; h < policy.actions.rows(); ++h) {
    Json row = Json::array();
    for (Eigen::Index s = 0; s < policy.actions.cols(); ++s) row.push_back(policy.actions(h, s));
    actions.push_back(std::move(row));
  }
  return {{"H", policy.actions.rows()}, {"S", policy.actions.cols()}, {"actions", std::move(actions)}};
}

Policy policy_from_json(const Json& doc) {
  try {
    const Json& actions = doc.at("actions");
    const int H = static_cast<int>(actions.size());
    const int S = H > 0 ? static_cast<int>(actions[0].size()) : 0;
    Policy policy{Eigen::MatrixXi::Zero(H, S)};
    for (int h = 0; h < H; ++h) {
      expect_size(actions[h], S, "actions[" + std::to_string(h) + "]");
      for (int s = 0; s < S; ++s) policy.actions(h, s) = actions[h][s].get<int>();
    }
    return policy;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed policy document: ") + e.what());
  }
}

Json values_to_json(const ValueTables& values) {
  Json V = Json::array(), Q = Json::array();
  for (Eigen::Index h = 0; h < values.V.rows(); ++h) {
    const Eigen::RowVectorXd row = values.V.row(h);
    V.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  for (const auto& q : values.Q) {
    Json stage = Json::array();
    for (Eigen::Index s = 0; s < q.rows(); ++s) {
      const Eigen::RowVectorXd row = q.row(s);
      stage.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    Q.push_back(std::move(stage));
  }
  return {{"V", std::move(V)}, {"Q", std::move(Q)}};
}

Json meta_to_json(const HardInstanceMeta& meta) {
  Json target = nullptr;
  if (meta.target)
    target = {{"h", meta.target->stage}, {"leaf", meta.target->leaf}, {"a", meta.target->action}};
  return {{"p", meta.p},
          {"epsilon", meta.epsilon},
          {"Hbar", meta.Hbar},
          {"L", meta.L},
          {"S", meta.S},
          {"d", meta.d},
          {"target", target},
          {"states",
           {{"waiting", meta.waiting()},
            {"root", meta.root()},
            {"first_leaf", meta.leaf_state(0)},
            {"good", meta.good()},
            {"bad", meta.bad()}}}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::invalid_argument("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

TabularMdp read_mdp_file(const std::filesystem::path& path) {
  return mdp_from_json(read_json_file(path));
}

}  // namespace ocevi
