#pragma once

// Line-oriented text format for finite sets, functions, lenses, spans and
// learners.
//
//   set NAME : lab1 lab2 ...
//   prod NAME = N1 * N2 [* N3 ...]
//   fn NAME : DOM -> COD
//     elem => elem
//   lens NAME : SRC -> DST get=FN put=FN
//   span NAME = LENS <- HEAD -> LENS
//   learner NAME : SRC -> DST params=SET I=FN U=FN r=FN
//
// `#` starts a comment when it begins a token. Product elements are written
// `(x,y)`; `prod NAME =` with no factors is the one-element unit set.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bilearn/learner.hpp"
#include "bilearn/lens.hpp"
#include "bilearn/symlens.hpp"

namespace bilearn {

enum class EntityKind { Set, Fn, Lens, Span, Learner };

std::string_view to_string(EntityKind kind);

class SpecDocument {
public:
    bool contains(const std::string& name) const { return kinds_.count(name) != 0; }
    /// Throws UnknownName.
    EntityKind kind_of(const std::string& name) const;

    /// Each throws UnknownName when `name` is not an entity of that kind.
    const FiniteSet& set(const std::string& name) const;
    const FinFn& fn(const std::string& name) const;
    const AsymmetricLens& lens(const std::string& name) const;
    const LensSpan& span(const std::string& name) const;
    const Learner& learner(const std::string& name) const;

    /// Names in declaration order.
    const std::vector<std::string>& names() const noexcept { return order_; }

    /// Each throws DuplicateLabel if the name is taken.
    void add(const std::string& name, FiniteSet value);
    void add(const std::string& name, FinFn value);
    void add(const std::string& name, AsymmetricLens value);
    void add(const std::string& name, LensSpan value);
    void add(const std::string& name, Learner value);

private:
    void claim(const std::string& name, EntityKind kind);

    std::map<std::string, EntityKind> kinds_;
    std::vector<std::string> order_;
    std::map<std::string, FiniteSet> sets_;
    std::map<std::string, FinFn> fns_;
    std::map<std::string, AsymmetricLens> lenses_;
    std::map<std::string, LensSpan> spans_;
    std::map<std::string, Learner> learners_;
};

/// Errors are ParseError, UnresolvedName, ShapeError or MissingMapping with
/// a `source:line:column:` prefix.
SpecDocument parse_spec_text(std::string_view text, const std::string& source = "<input>");
SpecDocument parse_spec(const std::filesystem::path& path);

/// Emits entities in the text format, generating names for the sets and
/// functions they depend on. Structurally equal sets and functions are
/// written once, and span legs reuse lenses already written.
class SpecWriter {
public:
    std::string add_set(const FiniteSet& s, const std::string& hint = "S");
    std::string add_fn(const FinFn& f, const std::string& hint = "f");
    std::string add_lens(const AsymmetricLens& l, const std::string& name);
    std::string add_span(const LensSpan& s, const std::string& name);
    std::string add_learner(const Learner& l, const std::string& name);

    /// Keeps `name` free for a later add_lens/add_span/add_learner call.
    void reserve(const std::string& name) { reserved_.insert(name); }

    const std::string& str() const noexcept { return out_; }

private:
    std::string fresh(const std::string& hint);
    std::string claim(const std::string& name);

    std::string out_;
    std::set<std::string> taken_;
    std::set<std::string> reserved_;
    std::vector<std::pair<FiniteSet, std::string>> sets_;
    std::vector<std::pair<FinFn, std::string>> fns_;
    std::vector<std::pair<AsymmetricLens, std::string>> lenses_;
};

/// Whole document, top-level names preserved.
std::string write_spec(const SpecDocument& doc);

} // namespace bilearn
