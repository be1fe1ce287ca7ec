#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <orbitforge/rational.hpp>
#include <orbitforge/space.hpp>

namespace orbitforge {

enum class TypeKind { Single, Double };

// An indecomposable nilpotent type: one chain Delta_h(0) or a pair of
// chains Delta_h(0,0), with a sign eps where the family's table row
// carries one.
struct TypeLabel {
  Family family = Family::GlSigmaPlus;
  std::size_t h = 0;
  TypeKind kind = TypeKind::Single;
  std::optional<int> eps;
  std::size_t multiplicity = 1;

  std::size_t chain_count() const { return kind == TypeKind::Single ? 1 : 2; }
  std::size_t block_dim() const { return (h + 1) * chain_count(); }

  friend bool operator==(const TypeLabel&, const TypeLabel&) = default;
};

bool type_row_exists(Family family, std::size_t h, TypeKind kind,
                     bool has_eps);
void validate_type_label(const TypeLabel& label);

// Negative-eigenvalue count of one copy's Gram, for table rows that
// define one; NoIndexDefined otherwise.
std::size_t type_index(const TypeLabel& label);

// A marked indecomposable nilpotent type (the core of a classification).
struct DistinguishedLabel {
  Family family = Family::GlSigmaPlus;
  std::size_t h = 0;
  TypeKind kind = TypeKind::Single;
  std::optional<int> eps;
  std::optional<Rational> modulus;
  int reduced_dim = 1;

  std::size_t chain_count() const { return kind == TypeKind::Single ? 1 : 2; }
  std::size_t block_dim() const { return (h + 1) * chain_count(); }

  friend bool operator==(const DistinguishedLabel&,
                         const DistinguishedLabel&) = default;
};

void validate_distinguished_label(const DistinguishedLabel& label);

// 'A' (sigma_plus fixes the marked vector), 'B' (sigma_minus eigenvector,
// isotropic), or 0 where no sigma is present.
char distinguished_condition(Family family);

// Parity rule for the induced form on W/YW: symmetric iff (h even and
// tau symmetric) or (h odd and tau alternating).
FormKind reduced_form_kind(FormKind tau_kind, std::size_t h);

struct SemisimpleZeroType {
  TypeLabel label;
  char case_tag;  // 'b', 'c', or 0
};

std::vector<SemisimpleZeroType> semisimple_zero_types(
    const StructuredSpace& space);

// Label grammar.  Items: "D[eps=+1,h=2](0)", "uD[h=1,mod=1/2](0,0)";
// lists carry one family prefix: "o+:D[eps=+1,h=2](0)+D[eps=-1,h=2](0)".
// Multiplicities are expanded as repeated items.
std::string type_item_string(const TypeLabel& label);
std::string type_list_string(Family family,
                             const std::vector<TypeLabel>& labels);
std::string distinguished_label_string(const DistinguishedLabel& label);

struct ParsedTypeList {
  Family family = Family::GlSigmaPlus;
  std::vector<TypeLabel> items;  // multiplicity 1 each
};
ParsedTypeList parse_type_list(const std::string& text);
DistinguishedLabel parse_distinguished_label(const std::string& text);

// Canonical residual order: h descending, singles before doubles,
// eps=+1 before eps=-1 before none.
void sort_labels(std::vector<TypeLabel>& labels);
// Merge equal labels into multiplicities, canonically sorted.
std::vector<TypeLabel> aggregate_labels(std::vector<TypeLabel> labels);
// Inverse of aggregation.
std::vector<TypeLabel> expand_labels(const std::vector<TypeLabel>& labels);

}  // namespace orbitforge
