#include <orbitforge/typelabel.hpp>

#include <algorithm>
#include <map>

#include <orbitforge/errors.hpp>

namespace orbitforge {

bool type_row_exists(Family family, std::size_t h, TypeKind kind,
                     bool has_eps) {
  bool even = h % 2 == 0;
  switch (family) {
    case Family::GlSigmaPlus:
      return kind == TypeKind::Single && !has_eps;
    case Family::GlSigmaMinus:
      return kind == TypeKind::Double && !has_eps;
    case Family::GlTauStar:
      return kind == TypeKind::Single && has_eps;
    case Family::OSigmaPlus:
      return even ? (kind == TypeKind::Single && has_eps)
                  : (kind == TypeKind::Double && !has_eps);
    case Family::OSigmaMinus:
      return kind == TypeKind::Double && (even ? !has_eps : has_eps);
    case Family::SpSigmaPlus:
      return even ? (kind == TypeKind::Double && !has_eps)
                  : (kind == TypeKind::Single && has_eps);
    case Family::SpSigmaMinus:
      return kind == TypeKind::Double && (even ? has_eps : !has_eps);
  }
  return false;
}

void validate_type_label(const TypeLabel& label) {
  if (label.eps && *label.eps != 1 && *label.eps != -1) {
    fail(ErrorName::InvalidLabel, "eps must be +1 or -1");
  }
  if (label.multiplicity == 0) {
    fail(ErrorName::InvalidLabel, "multiplicity must be positive");
  }
  if (!type_row_exists(label.family, label.h, label.kind,
                       label.eps.has_value())) {
    fail(ErrorName::InvalidLabel,
         "no type row: " + std::string(family_prefix(label.family)) + " " +
             type_item_string(label));
  }
}

std::size_t type_index(const TypeLabel& label) {
  validate_type_label(label);
  bool even = label.h % 2 == 0;
  // delta = (-1)^{h/2} eps, defined for even h.
  auto delta = [&]() -> long {
    long sign = (label.h / 2) % 2 == 0 ? 1 : -1;
    return sign * *label.eps;
  };
  switch (label.family) {
    case Family::GlTauStar:
      return even ? (label.h + 1 - delta()) / 2 : (label.h + 1) / 2;
    case Family::OSigmaPlus:
      return even ? (label.h + 1 - delta()) / 2 : label.h + 1;
    case Family::SpSigmaMinus:
      return even ? (label.h + 1) - delta() : label.h + 1;
    default:
      break;
  }
  fail(ErrorName::NoIndexDefined,
       "no index column for " + std::string(family_prefix(label.family)) +
           ":" + type_item_string(label));
}

char distinguished_condition(Family family) {
  switch (family) {
    case Family::GlSigmaPlus:
    case Family::OSigmaPlus:
    case Family::SpSigmaPlus:
      return 'A';
    case Family::GlSigmaMinus:
    case Family::OSigmaMinus:
    case Family::SpSigmaMinus:
      return 'B';
    case Family::GlTauStar:
      return 0;
  }
  return 0;
}

void validate_distinguished_label(const DistinguishedLabel& label) {
  auto reject = [&](const std::string& why) {
    fail(ErrorName::InvalidLabel,
         why + ": " + distinguished_label_string(label));
  };
  if (label.eps && *label.eps != 1 && *label.eps != -1) {
    reject("eps must be +1 or -1");
  }
  int arity = label.kind == TypeKind::Single ? 1 : 2;
  if (label.reduced_dim != arity) reject("reduced_dim must match kind");
  bool even = label.h % 2 == 0;
  bool has_eps = label.eps.has_value();
  bool has_mod = label.modulus.has_value();
  bool positive_mod = has_mod && label.modulus->sign() > 0;
  bool nonzero_mod = has_mod && !label.modulus->is_zero();

  switch (label.family) {
    case Family::GlSigmaPlus:
      if (label.kind != TypeKind::Single) reject("row is single-chain");
      if (has_eps) reject("row carries no eps");
      if (!nonzero_mod) reject("row requires a nonzero modulus");
      return;
    case Family::GlSigmaMinus:
      if (label.kind != TypeKind::Double) reject("row is double-chain");
      if (has_eps || has_mod) reject("row carries neither eps nor modulus");
      return;
    case Family::GlTauStar:
      if (label.kind == TypeKind::Single) {
        if (label.h < 1) reject("single-chain row needs h >= 1");
        if (!has_eps) reject("row requires eps");
        if (!positive_mod) reject("row requires modulus > 0");
      } else {
        if (!even) reject("double row requires h even");
        if (has_eps || has_mod) reject("double row carries neither eps nor modulus");
      }
      return;
    case Family::OSigmaPlus:
      if (label.kind == TypeKind::Single) {
        if (!even || label.h < 2) reject("row requires h even >= 2");
        if (!has_eps) reject("row requires eps");
        if (!positive_mod) reject("row requires modulus > 0");
      } else {
        if (has_eps || has_mod) reject("double row carries neither eps nor modulus");
      }
      return;
    case Family::OSigmaMinus:
      if (label.kind != TypeKind::Double) reject("rows are double-chain");
      if (has_mod) reject("rows carry no modulus");
      if (even) {
        if (has_eps) reject("h even row carries no eps");
      } else {
        if (!has_eps) reject("h odd row requires eps");
      }
      return;
    case Family::SpSigmaPlus:
      if (label.kind == TypeKind::Single) {
        if (even) reject("single row requires h odd");
        if (!has_eps) reject("row requires eps");
        if (!positive_mod) reject("row requires modulus > 0");
      } else {
        if (has_eps || has_mod) reject("double row carries neither eps nor modulus");
      }
      return;
    case Family::SpSigmaMinus:
      if (label.kind != TypeKind::Double) reject("rows are double-chain");
      if (has_mod) reject("rows carry no modulus");
      if (even) {
        if (!has_eps) reject("h even row requires eps");
      } else {
        if (has_eps) reject("h odd row carries no eps");
      }
      return;
  }
  reject("unknown family");
}

FormKind reduced_form_kind(FormKind tau_kind, std::size_t h) {
  bool even = h % 2 == 0;
  switch (tau_kind) {
    case FormKind::Symmetric:
      return even ? FormKind::Symmetric : FormKind::Alternating;
    case FormKind::Alternating:
      return even ? FormKind::Alternating : FormKind::Symmetric;
    case FormKind::Hermitian:
      break;
  }
  fail(ErrorName::ConditionViolated,
       "parity rule covers symmetric and alternating forms only");
}

std::vector<SemisimpleZeroType> semisimple_zero_types(
    const StructuredSpace& space) {
  auto single = [&](std::optional<int> eps, char tag) {
    return SemisimpleZeroType{
        {space.family, 0, TypeKind::Single, eps, 1}, tag};
  };
  auto dbl = [&](std::optional<int> eps, char tag) {
    return SemisimpleZeroType{
        {space.family, 0, TypeKind::Double, eps, 1}, tag};
  };
  switch (space.family) {
    case Family::GlSigmaPlus:
      return {single(std::nullopt, 'c')};
    case Family::GlSigmaMinus:
      return {dbl(std::nullopt, 'b')};
    case Family::GlTauStar:
      return {single(1, 0), single(-1, 0)};
    case Family::OSigmaPlus:
      return {single(1, 0), single(-1, 0)};
    case Family::OSigmaMinus:
      return {dbl(std::nullopt, 'b')};
    case Family::SpSigmaPlus:
      return {dbl(std::nullopt, 'c')};
    case Family::SpSigmaMinus:
      return {dbl(1, 0), dbl(-1, 0)};
  }
  return {};
}

namespace {

std::string bracket_params(std::optional<int> eps, std::size_t h,
                           const std::optional<Rational>& mod) {
  std::string out = "[";
  if (eps) out += std::string("eps=") + (*eps > 0 ? "+1" : "-1") + ",";
  out += "h=" + std::to_string(h);
  if (mod) out += ",mod=" + mod->str();
  out += "]";
  return out;
}

std::string kind_suffix(TypeKind kind) {
  return kind == TypeKind::Single ? "(0)" : "(0,0)";
}

}  // namespace

std::string type_item_string(const TypeLabel& label) {
  return "D" + bracket_params(label.eps, label.h, std::nullopt) +
         kind_suffix(label.kind);
}

std::string type_list_string(Family family,
                             const std::vector<TypeLabel>& labels) {
  std::string out = std::string(family_prefix(family)) + ":";
  bool first = true;
  for (const TypeLabel& label : labels) {
    for (std::size_t c = 0; c < label.multiplicity; ++c) {
      if (!first) out += "+";
      out += type_item_string(label);
      first = false;
    }
  }
  return out;
}

std::string distinguished_label_string(const DistinguishedLabel& label) {
  return std::string(family_prefix(label.family)) + ":uD" +
         bracket_params(label.eps, label.h, label.modulus) +
         kind_suffix(label.kind);
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) {
      fail(ErrorName::ParseError, std::string("expected '") + c + "' at " +
                                      std::to_string(pos) + " in " + text);
    }
  }
  bool eat_word(const std::string& w) {
    if (text.compare(pos, w.size(), w) != 0) return false;
    pos += w.size();
    return true;
  }
  std::string until(const std::string& stops) {
    std::size_t start = pos;
    while (!done() && stops.find(text[pos]) == std::string::npos) ++pos;
    return text.substr(start, pos - start);
  }
};

struct Item {
  bool marked = false;
  std::optional<int> eps;
  std::size_t h = 0;
  std::optional<Rational> mod;
  TypeKind kind = TypeKind::Single;
};

Item parse_item(Cursor& cur) {
  Item item;
  if (cur.eat_word("uD")) {
    item.marked = true;
  } else if (!cur.eat_word("D")) {
    fail(ErrorName::ParseError, "expected D or uD in " + cur.text);
  }
  cur.expect('[');
  bool have_h = false;
  while (true) {
    std::string key = cur.until("=,]");
    cur.expect('=');
    std::string value = cur.until(",]");
    if (key == "eps") {
      if (value == "+1") {
        item.eps = 1;
      } else if (value == "-1") {
        item.eps = -1;
      } else {
        fail(ErrorName::ParseError, "eps must be +1 or -1, got " + value);
      }
    } else if (key == "h") {
      if (value.empty() ||
          value.find_first_not_of("0123456789") != std::string::npos) {
        fail(ErrorName::ParseError, "h must be a nonnegative integer");
      }
      item.h = std::stoul(value);
      have_h = true;
    } else if (key == "mod") {
      item.mod = Rational::from_string(value);
    } else {
      fail(ErrorName::ParseError, "unknown key '" + key + "'");
    }
    if (cur.eat(']')) break;
    cur.expect(',');
  }
  if (!have_h) fail(ErrorName::ParseError, "missing h in " + cur.text);
  cur.expect('(');
  cur.expect('0');
  if (cur.eat(',')) {
    cur.expect('0');
    item.kind = TypeKind::Double;
  }
  cur.expect(')');
  return item;
}

Family parse_family_prefix(Cursor& cur) {
  std::string prefix = cur.until(":");
  cur.expect(':');
  return family_from_prefix(prefix);
}

}  // namespace

ParsedTypeList parse_type_list(const std::string& text) {
  Cursor cur{text};
  ParsedTypeList out;
  out.family = parse_family_prefix(cur);
  while (true) {
    Item item = parse_item(cur);
    if (item.marked) fail(ErrorName::ParseError, "uD not allowed in a type list");
    if (item.mod) fail(ErrorName::ParseError, "mod not allowed in a type list");
    TypeLabel label{out.family, item.h, item.kind, item.eps, 1};
    validate_type_label(label);
    out.items.push_back(label);
    if (cur.done()) break;
    cur.expect('+');
  }
  return out;
}

DistinguishedLabel parse_distinguished_label(const std::string& text) {
  Cursor cur{text};
  Family family = parse_family_prefix(cur);
  Item item = parse_item(cur);
  if (!cur.done()) fail(ErrorName::ParseError, "trailing text in " + text);
  if (!item.marked) {
    fail(ErrorName::ParseError, "distinguished label needs uD in " + text);
  }
  DistinguishedLabel label{family,   item.h,
                           item.kind, item.eps,
                           item.mod,  item.kind == TypeKind::Single ? 1 : 2};
  validate_distinguished_label(label);
  return label;
}

namespace {

// h descending, singles first, eps +1 < -1 < none.
std::tuple<long, int, int> order_key(const TypeLabel& label) {
  int eps_rank = label.eps ? (*label.eps > 0 ? 0 : 1) : 2;
  return {-static_cast<long>(label.h),
          label.kind == TypeKind::Single ? 0 : 1, eps_rank};
}

}  // namespace

void sort_labels(std::vector<TypeLabel>& labels) {
  std::stable_sort(labels.begin(), labels.end(),
                   [](const TypeLabel& a, const TypeLabel& b) {
                     return order_key(a) < order_key(b);
                   });
}

std::vector<TypeLabel> aggregate_labels(std::vector<TypeLabel> labels) {
  sort_labels(labels);
  std::vector<TypeLabel> out;
  for (TypeLabel& label : labels) {
    std::size_t count = label.multiplicity;
    label.multiplicity = 1;
    if (!out.empty()) {
      TypeLabel probe = out.back();
      probe.multiplicity = 1;
      if (probe == label) {
        out.back().multiplicity += count;
        continue;
      }
    }
    label.multiplicity = count;
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<TypeLabel> expand_labels(const std::vector<TypeLabel>& labels) {
  std::vector<TypeLabel> out;
  for (const TypeLabel& label : labels) {
    TypeLabel one = label;
    one.multiplicity = 1;
    for (std::size_t c = 0; c < label.multiplicity; ++c) out.push_back(one);
  }
  return out;
}

}  // namespace orbitforge
