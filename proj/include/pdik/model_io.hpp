#ifndef PDIK_MODEL_IO_HPP_
#define PDIK_MODEL_IO_HPP_

#include <Eigen/Geometry>

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdik/model.hpp"

namespace pdik {
namespace detail {

// Minimal tokenizer for the block syntax `kind { key = value, ... }`.
// Values are numbers, identifiers, or bracketed number lists. `#` starts a
// comment running to end of line.
struct Token {
  enum Kind { Ident, Number, LBrace, RBrace, LBracket, RBracket, Equals, Comma, End } kind;
  std::string text;
  double number = 0.0;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    if (pos_ >= text_.size()) {
      t.kind = Token::End;
      return t;
    }
    const char c = text_[pos_];
    switch (c) {
      case '{': ++pos_; t.kind = Token::LBrace; return t;
      case '}': ++pos_; t.kind = Token::RBrace; return t;
      case '[': ++pos_; t.kind = Token::LBracket; return t;
      case ']': ++pos_; t.kind = Token::RBracket; return t;
      case '=': ++pos_; t.kind = Token::Equals; return t;
      case ',': ++pos_; t.kind = Token::Comma; return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      const size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             std::string("{}[],=#").find(text_[pos_]) == std::string::npos)
        ++pos_;
      t.text = text_.substr(start, pos_ - start);
      try {
        size_t used = 0;
        t.number = std::stod(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument(t.text);
      } catch (const std::exception&) {
        throw Error("line " + std::to_string(t.line) + ": bad number '" + t.text + "'");
      }
      t.kind = Token::Number;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '.' || text_[pos_] == '-'))
        ++pos_;
      t.kind = Token::Ident;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    throw Error("line " + std::to_string(line_) + ": unexpected character '" +
                std::string(1, c) + "'");
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
};

struct FieldValue {
  std::optional<double> number;
  std::string ident;
  std::vector<Token> seq;  ///< bracketed items, Number or Ident tokens
  bool bracketed = false;
  int line = 0;

  bool is_number() const { return number.has_value(); }

  std::vector<double> numeric_list() const {
    std::vector<double> out;
    for (const Token& t : seq) {
      if (t.kind != Token::Number)
        throw Error("line " + std::to_string(line) + ": expected a number, got '" + t.text + "'");
      out.push_back(t.number);
    }
    return out;
  }

  std::vector<std::string> string_list() const {
    std::vector<std::string> out;
    for (const Token& t : seq) out.push_back(t.text);
    return out;
  }
};

struct Block {
  std::string kind;
  int line = 0;
  std::vector<std::pair<std::string, FieldValue>> fields;

  const FieldValue* find(const std::string& key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }

  double number(const std::string& key) const {
    const FieldValue* v = require(key);
    if (!v->is_number())
      throw Error("line " + std::to_string(line) + ": field '" + key + "' expects a number");
    return *v->number;
  }

  double number_or(const std::string& key, double fallback) const {
    const FieldValue* v = find(key);
    return v ? number(key) : fallback;
  }

  std::string ident(const std::string& key) const {
    const FieldValue* v = require(key);
    if (v->ident.empty())
      throw Error("line " + std::to_string(line) + ": field '" + key + "' expects a name");
    return v->ident;
  }

  std::vector<double> list(const std::string& key, size_t count) const {
    const FieldValue* v = require(key);
    const auto values = v->numeric_list();
    if (values.size() != count)
      throw Error("line " + std::to_string(line) + ": field '" + key + "' expects " +
                  std::to_string(count) + " values");
    return values;
  }

  const FieldValue* require(const std::string& key) const {
    const FieldValue* v = find(key);
    if (!v)
      throw Error("line " + std::to_string(line) + ": " + kind + " block is missing field '" +
                  key + "'");
    return v;
  }
};

inline std::vector<Block> parse_blocks(const std::string& text) {
  Lexer lex(text);
  std::vector<Block> blocks;
  Token t = lex.next();
  while (t.kind != Token::End) {
    if (t.kind != Token::Ident)
      throw Error("line " + std::to_string(t.line) + ": expected a block name");
    Block b;
    b.kind = t.text;
    b.line = t.line;
    t = lex.next();
    if (t.kind != Token::LBrace)
      throw Error("line " + std::to_string(t.line) + ": expected '{' after '" + b.kind + "'");
    t = lex.next();
    while (t.kind != Token::RBrace) {
      if (t.kind == Token::Comma) {
        t = lex.next();
        continue;
      }
      if (t.kind != Token::Ident)
        throw Error("line " + std::to_string(t.line) + ": expected a field name in '" + b.kind +
                    "' block");
      FieldValue v;
      const std::string key = t.text;
      v.line = t.line;
      t = lex.next();
      if (t.kind != Token::Equals)
        throw Error("line " + std::to_string(t.line) + ": expected '=' after '" + key + "'");
      t = lex.next();
      if (t.kind == Token::Number) {
        v.number = t.number;
        t = lex.next();
      } else if (t.kind == Token::Ident) {
        v.ident = t.text;
        t = lex.next();
      } else if (t.kind == Token::LBracket) {
        v.bracketed = true;
        t = lex.next();
        while (t.kind != Token::RBracket) {
          if (t.kind == Token::Comma) {
            t = lex.next();
            continue;
          }
          if (t.kind != Token::Number && t.kind != Token::Ident)
            throw Error("line " + std::to_string(t.line) + ": bad item in '" + key + "' list");
          v.seq.push_back(t);
          t = lex.next();
        }
        t = lex.next();
      } else {
        throw Error("line " + std::to_string(t.line) + ": bad value for '" + key + "'");
      }
      b.fields.emplace_back(key, std::move(v));
      if (t.kind == Token::Comma) t = lex.next();
    }
    t = lex.next();
    blocks.push_back(std::move(b));
  }
  return blocks;
}

/// Resolves `base`, a numeric index, or a joint name to a parent index.
inline int resolve_parent(const RobotModel& model, const Block& b, const std::string& key) {
  const FieldValue* v = b.require(key);
  if (v->is_number()) {
    const double d = *v->number;
    const int idx = static_cast<int>(d);
    if (idx != d) throw Error("line " + std::to_string(b.line) + ": '" + key + "' must be integral");
    return idx;
  }
  if (v->ident == "base") return -1;
  for (int i = 0; i < model.dof(); ++i)
    if (model.joints[i].name == v->ident) return i;
  throw Error("line " + std::to_string(b.line) + ": unknown joint '" + v->ident + "' in '" + key +
              "'");
}

inline Mat3 rpy_to_matrix(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

}  // namespace detail

/**
 * @brief Parses a robot description into a validated RobotModel.
 *
 * The format is one block per entity, in topological order for joints:
 *
 *   joint  { name = j1, parent = base, axis = [0,0,1], origin_xyz = [0,0,0],
 *            origin_rpy = [0,0,0], limits = [-3.1,3.1], vel_limit = 3.0 }
 *   frame  { name = end, parent_joint = j1, offset_xyz = [0.3,0,0] }
 *   sphere { name = torso, parent_joint = base, offset_xyz = [0,0,0.2], radius = 0.15 }
 *   cbf_pair { frame = end, sphere = torso, limb_radius = 0.04, margin = 0.02 }
 *
 * Angles are radians, lengths meters. Parent references accept an index,
 * a joint name, or `base`.
 */
inline RobotModel load_model(const std::string& text) {
  RobotModel model;
  for (const detail::Block& b : detail::parse_blocks(text)) {
    if (b.kind == "joint") {
      JointSpec j;
      j.name = b.ident("name");
      if (const auto* type = b.find("type"); type && type->ident != "revolute")
        throw Error("line " + std::to_string(b.line) + ": joint '" + j.name +
                    "': only revolute joints are supported");
      j.parent = detail::resolve_parent(model, b, "parent");
      const auto axis = b.list("axis", 3);
      j.axis = Vec3(axis[0], axis[1], axis[2]);
      const double norm = j.axis.norm();
      if (std::abs(norm - 1.0) > 1e-6)
        throw Error("line " + std::to_string(b.line) + ": joint '" + j.name +
                    "': axis must be a unit vector");
      j.axis /= norm;
      if (b.find("origin_xyz")) {
        const auto xyz = b.list("origin_xyz", 3);
        j.origin_translation = Vec3(xyz[0], xyz[1], xyz[2]);
      }
      if (b.find("origin_rpy")) {
        const auto rpy = b.list("origin_rpy", 3);
        j.origin_rotation = detail::rpy_to_matrix(rpy[0], rpy[1], rpy[2]);
      }
      const auto limits = b.list("limits", 2);
      j.q_min = limits[0];
      j.q_max = limits[1];
      if (!(j.q_min < j.q_max))
        throw Error("line " + std::to_string(b.line) + ": joint '" + j.name +
                    "': limits require q_min < q_max");
      j.velocity_limit = b.number("vel_limit");
      for (const JointSpec& other : model.joints)
        if (other.name == j.name)
          throw Error("line " + std::to_string(b.line) + ": duplicate joint '" + j.name + "'");
      model.joints.push_back(std::move(j));
    } else if (b.kind == "frame") {
      FrameSpec f;
      f.name = b.ident("name");
      f.parent_joint = detail::resolve_parent(model, b, "parent_joint");
      if (b.find("offset_xyz")) {
        const auto xyz = b.list("offset_xyz", 3);
        f.offset = Vec3(xyz[0], xyz[1], xyz[2]);
      }
      model.frames.push_back(std::move(f));
    } else if (b.kind == "sphere") {
      CollisionSphere s;
      s.name = b.ident("name");
      s.parent_joint = detail::resolve_parent(model, b, "parent_joint");
      if (b.find("offset_xyz")) {
        const auto xyz = b.list("offset_xyz", 3);
        s.offset = Vec3(xyz[0], xyz[1], xyz[2]);
      }
      s.radius = b.number("radius");
      model.spheres.push_back(std::move(s));
    } else if (b.kind == "cbf_pair") {
      CbfPair p;
      p.tracked_frame = b.ident("frame");
      p.sphere = b.ident("sphere");
      p.limb_radius = b.number_or("limb_radius", 0.0);
      p.margin = b.number_or("margin", 0.0);
      model.cbf_pairs.push_back(std::move(p));
    } else {
      throw Error("line " + std::to_string(b.line) + ": unknown block '" + b.kind + "'");
    }
  }
  model.validate();
  return model;
}

inline RobotModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

}  // namespace pdik

#endif  // PDIK_MODEL_IO_HPP_
