#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "alab/butler.hpp"
#include "alab/chain.hpp"
#include "alab/equations.hpp"
#include "alab/fg_group.hpp"
#include "alab/galois.hpp"
#include "alab/structured.hpp"

namespace alab {

using Json = nlohmann::json;

/// Read-only view of a JSON value that knows its location. Every failure is
/// an InputError whose path is a JSON pointer into the document.
class JsonIn {
 public:
  explicit JsonIn(const Json& j, std::string path = "") : j_(&j), path_(std::move(path)) {}

  const Json& raw() const noexcept { return *j_; }
  std::string path() const { return path_.empty() ? "/" : path_; }
  [[noreturn]] void fail(const std::string& msg) const;

  /// Rejects keys outside `keys`; requires an object.
  void allow(std::initializer_list<std::string_view> keys) const;
  bool has(const std::string& key) const;
  JsonIn at(const std::string& key) const;
  std::optional<JsonIn> get(const std::string& key) const;
  JsonIn at(std::size_t i) const;
  std::size_t size() const;  // arrays

  bool is_string() const noexcept { return j_->is_string(); }
  bool is_array() const noexcept { return j_->is_array(); }
  bool is_object() const noexcept { return j_->is_object(); }

  std::string string() const;
  bool boolean() const;
  Integer integer() const;
  Rational rational() const;
  std::size_t count() const;  // nonnegative machine integer

 private:
  const Json* j_;
  std::string path_;
};

/// Parses text; syntax errors become InputError.
Json parse_json(const std::string& text, const std::string& what);
Json load_json_file(const std::string& file);

// Scalars and matrices. Integers and rationals are written as decimal strings.
Json to_json(const Integer& x);
Json to_json(const Rational& x);
Json to_json(const Height& h);
Json to_json(const IntVector& v);
Json to_json(const RatVector& v);
Json to_json(const IntMatrix& A);
Json to_json(const RatMatrix& A);
IntVector read_int_vector(const JsonIn& in);
RatVector read_rat_vector(const JsonIn& in);
IntMatrix read_int_matrix(const JsonIn& in, std::optional<std::size_t> cols = std::nullopt);
RatMatrix read_rat_matrix(const JsonIn& in, std::optional<std::size_t> cols = std::nullopt);
Height read_height(const JsonIn& in);
std::vector<Integer> read_integer_list(const JsonIn& in);

// Groups.
Json to_json(const FgGroup& G);
Json to_json(const FgSubgroup& H);
FgGroup read_fg_group(const JsonIn& in);
/// Group fields plus "generators" (canonical coordinates, or original ones
/// when the group was given by relations).
FgSubgroup read_fg_subgroup(const JsonIn& in);
/// Vectors in the canonical coordinates of G (original ones for relation input).
std::vector<IntVector> read_fg_elements(const FgGroup& G, const JsonIn& in);

Json to_json(const Characteristic& c);
Json to_json(const CompletelyDecomposable& C);
Characteristic read_characteristic(const JsonIn& in);
/// {"characteristics": [...]} or a bare list.
CompletelyDecomposable read_cd(const JsonIn& in);

Json to_json(const Atom& a);
Json to_json(const StructuredGroup& G);
Json to_json(const StructuredGroup& G, const GroupElement& x);
Atom read_atom(const JsonIn& in);
/// {"atoms": [...]}; an fg group description is accepted and converted.
StructuredGroup read_structured(const JsonIn& in);
GroupElement read_element(const StructuredGroup& G, const JsonIn& in);

Json to_json(const Embedding& e);
Embedding read_embedding(const JsonIn& in);

// Systems and streams (elements are read against the given group).
Json to_json(const StructuredGroup& G, const Equation& e);
Json to_json(const StructuredGroup& G, const LinearSystem& s);
Json to_json(const StructuredGroup& G, const SystemStream& s);
Equation read_equation(const StructuredGroup& G, const JsonIn& in);
LinearSystem read_system(const StructuredGroup& G, const JsonIn& in);
SystemStream read_stream(const StructuredGroup& G, const JsonIn& in);

Json to_json(const ChainSpec& s);
ChainSpec read_chain_spec(const JsonIn& in);

AmalgamationInput read_amalgamation(const JsonIn& in);
Json to_json(const AmalgamationInput& in);

}  // namespace alab
