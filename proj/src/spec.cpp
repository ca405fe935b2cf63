#include "bilearn/spec.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace bilearn {

std::string_view to_string(EntityKind kind)
{
    switch (kind) {
    case EntityKind::Set: return "set";
    case EntityKind::Fn: return "fn";
    case EntityKind::Lens: return "lens";
    case EntityKind::Span: return "span";
    case EntityKind::Learner: return "learner";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// SpecDocument

EntityKind SpecDocument::kind_of(const std::string& name) const
{
    const auto it = kinds_.find(name);
    if (it == kinds_.end()) {
        throw Error(ErrorKind::UnknownName, "no entity named '" + name + "'");
    }
    return it->second;
}

namespace {

template <typename T>
const T& lookup(const std::map<std::string, T>& table, const std::string& name, std::string_view kind)
{
    const auto it = table.find(name);
    if (it == table.end()) {
        throw Error(ErrorKind::UnknownName, "no " + std::string(kind) + " named '" + name + "'");
    }
    return it->second;
}

} // namespace

const FiniteSet& SpecDocument::set(const std::string& name) const { return lookup(sets_, name, "set"); }
const FinFn& SpecDocument::fn(const std::string& name) const { return lookup(fns_, name, "fn"); }
const AsymmetricLens& SpecDocument::lens(const std::string& name) const { return lookup(lenses_, name, "lens"); }
const LensSpan& SpecDocument::span(const std::string& name) const { return lookup(spans_, name, "span"); }
const Learner& SpecDocument::learner(const std::string& name) const { return lookup(learners_, name, "learner"); }

void SpecDocument::claim(const std::string& name, EntityKind kind)
{
    if (!kinds_.emplace(name, kind).second) {
        throw Error(ErrorKind::DuplicateLabel, "name '" + name + "' is already defined");
    }
    order_.push_back(name);
}

void SpecDocument::add(const std::string& name, FiniteSet value)
{
    claim(name, EntityKind::Set);
    sets_.emplace(name, std::move(value));
}

void SpecDocument::add(const std::string& name, FinFn value)
{
    claim(name, EntityKind::Fn);
    fns_.emplace(name, std::move(value));
}

void SpecDocument::add(const std::string& name, AsymmetricLens value)
{
    claim(name, EntityKind::Lens);
    lenses_.emplace(name, std::move(value));
}

void SpecDocument::add(const std::string& name, LensSpan value)
{
    claim(name, EntityKind::Span);
    spans_.emplace(name, std::move(value));
}

void SpecDocument::add(const std::string& name, Learner value)
{
    claim(name, EntityKind::Learner);
    learners_.emplace(name, std::move(value));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
    std::string text;
    std::size_t col = 0;
};

std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i >= line.size() || line[i] == '#') {
            break;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        out.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    return out;
}

bool valid_name(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' || c == '\'')) {
            return false;
        }
    }
    return true;
}

class Parser {
public:
    Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    SpecDocument run()
    {
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            const std::size_t end = std::min(text_.find('\n', pos), text_.size());
            std::string_view line = text_.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r') {
                line.remove_suffix(1);
            }
            ++line_no_;
            handle(line);
            if (end == text_.size()) {
                break;
            }
            pos = end + 1;
        }
        finish_fn();
        return std::move(doc_);
    }

private:
    struct PendingFn {
        std::string name;
        std::size_t line = 0;
        std::size_t col = 0;
        FiniteSet dom;
        FiniteSet cod;
        std::vector<std::optional<Index>> table;
    };

    [[noreturn]] void fail(ErrorKind kind, std::size_t col, const std::string& msg) const
    {
        fail_at(kind, line_no_, col, msg);
    }

    [[noreturn]] void fail_at(ErrorKind kind, std::size_t line, std::size_t col, const std::string& msg) const
    {
        throw Error(kind, source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }

    void handle(std::string_view line)
    {
        const std::vector<Token> tokens = tokenize(line);
        if (tokens.empty()) {
            return;
        }
        const bool indented = std::isspace(static_cast<unsigned char>(line.front())) != 0;
        if (indented) {
            if (!pending_) {
                fail(ErrorKind::ParseError, tokens[0].col, "indented line outside a fn block");
            }
            mapping(tokens);
            return;
        }
        finish_fn();
        const std::string& keyword = tokens[0].text;
        if (keyword == "set") {
            decl_set(tokens);
        } else if (keyword == "prod") {
            decl_prod(tokens);
        } else if (keyword == "fn") {
            decl_fn(tokens);
        } else if (keyword == "lens") {
            decl_lens(tokens);
        } else if (keyword == "span") {
            decl_span(tokens);
        } else if (keyword == "learner") {
            decl_learner(tokens);
        } else {
            fail(ErrorKind::ParseError, tokens[0].col, "unknown declaration '" + keyword + "'");
        }
    }

    void expect(const std::vector<Token>& t, std::size_t i, const std::string& text)
    {
        if (i >= t.size()) {
            fail(ErrorKind::ParseError, t.back().col + t.back().text.size(), "expected '" + text + "'");
        }
        if (t[i].text != text) {
            fail(ErrorKind::ParseError, t[i].col, "expected '" + text + "', found '" + t[i].text + "'");
        }
    }

    const Token& at(const std::vector<Token>& t, std::size_t i, const char* what)
    {
        if (i >= t.size()) {
            fail(ErrorKind::ParseError, t.back().col + t.back().text.size(), std::string("expected ") + what);
        }
        return t[i];
    }

    std::string new_name(const std::vector<Token>& t)
    {
        const Token& tok = at(t, 1, "a name");
        if (!valid_name(tok.text)) {
            fail(ErrorKind::ParseError, tok.col, "invalid name '" + tok.text + "'");
        }
        if (doc_.contains(tok.text) || (pending_ && pending_->name == tok.text)) {
            fail(ErrorKind::ParseError, tok.col, "name '" + tok.text + "' is already defined");
        }
        return tok.text;
    }

    void no_trailing(const std::vector<Token>& t, std::size_t count)
    {
        if (t.size() > count) {
            fail(ErrorKind::ParseError, t[count].col, "unexpected '" + t[count].text + "'");
        }
    }

    void require_kind(const Token& tok, EntityKind kind)
    {
        if (!doc_.contains(tok.text)) {
            fail(ErrorKind::UnresolvedName, tok.col, "unresolved name '" + tok.text + "'");
        }
        const EntityKind actual = doc_.kind_of(tok.text);
        if (actual != kind) {
            fail(ErrorKind::ShapeError, tok.col, "'" + tok.text + "' is a " + std::string(to_string(actual))
                                                     + ", expected a " + std::string(to_string(kind)));
        }
    }

    const FiniteSet& set_ref(const Token& tok)
    {
        require_kind(tok, EntityKind::Set);
        return doc_.set(tok.text);
    }

    const FinFn& fn_ref(const Token& tok)
    {
        require_kind(tok, EntityKind::Fn);
        return doc_.fn(tok.text);
    }

    /// key=value arguments after position `from`; every key in `keys` exactly once.
    std::map<std::string, Token> keyed(const std::vector<Token>& t, std::size_t from,
                                       const std::vector<std::string>& keys)
    {
        std::map<std::string, Token> out;
        for (std::size_t i = from; i < t.size(); ++i) {
            const auto eq = t[i].text.find('=');
            if (eq == std::string::npos) {
                fail(ErrorKind::ParseError, t[i].col, "expected key=value, found '" + t[i].text + "'");
            }
            const std::string key = t[i].text.substr(0, eq);
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(ErrorKind::ParseError, t[i].col, "unknown key '" + key + "'");
            }
            if (out.count(key) != 0) {
                fail(ErrorKind::ParseError, t[i].col, "duplicate key '" + key + "'");
            }
            out.emplace(key, Token{t[i].text.substr(eq + 1), t[i].col + eq + 1});
        }
        for (const auto& key : keys) {
            if (out.count(key) == 0) {
                fail(ErrorKind::ParseError, t.back().col, "missing " + key + "=");
            }
        }
        return out;
    }

    void shape_check(bool ok, const Token& tok, const std::string& msg)
    {
        if (!ok) {
            fail(ErrorKind::ShapeError, tok.col, msg);
        }
    }

    void decl_set(const std::vector<Token>& t)
    {
        const std::string name = new_name(t);
        expect(t, 2, ":");
        std::vector<std::string> labels;
        for (std::size_t i = 3; i < t.size(); ++i) {
            if (std::find(labels.begin(), labels.end(), t[i].text) != labels.end()) {
                fail(ErrorKind::ParseError, t[i].col, "duplicate label '" + t[i].text + "'");
            }
            labels.push_back(t[i].text);
        }
        doc_.add(name, FiniteSet::atomic(std::move(labels)));
    }

    void decl_prod(const std::vector<Token>& t)
    {
        const std::string name = new_name(t);
        expect(t, 2, "=");
        std::vector<FiniteSet> factors;
        for (std::size_t i = 3; i < t.size(); ++i) {
            if ((i - 3) % 2 == 1) {
                expect(t, i, "*");
                at(t, i + 1, "a set name after '*'");
                continue;
            }
            factors.push_back(set_ref(t[i]));
        }
        doc_.add(name, FiniteSet::product(std::move(factors)));
    }

    void decl_fn(const std::vector<Token>& t)
    {
        const std::string name = new_name(t);
        expect(t, 2, ":");
        const FiniteSet& dom = set_ref(at(t, 3, "a domain set"));
        expect(t, 4, "->");
        const FiniteSet& cod = set_ref(at(t, 5, "a codomain set"));
        no_trailing(t, 6);
        pending_ = PendingFn{name, line_no_, t[1].col, dom, cod, std::vector<std::optional<Index>>(dom.size())};
    }

    void mapping(const std::vector<Token>& t)
    {
        PendingFn& fn = *pending_;
        if (t.size() != 3 || t[1].text != "=>") {
            fail(ErrorKind::ParseError, t[0].col, "expected 'elem => elem'");
        }
        const auto x = fn.dom.find(t[0].text);
        if (!x) {
            fail(ErrorKind::ParseError, t[0].col, "'" + t[0].text + "' is not an element of " + fn.dom.describe());
        }
        const auto y = fn.cod.find(t[2].text);
        if (!y) {
            fail(ErrorKind::ParseError, t[2].col, "'" + t[2].text + "' is not an element of " + fn.cod.describe());
        }
        if (fn.table[*x]) {
            fail(ErrorKind::ParseError, t[0].col, "'" + t[0].text + "' is mapped twice");
        }
        fn.table[*x] = *y;
    }

    void finish_fn()
    {
        if (!pending_) {
            return;
        }
        PendingFn fn = std::move(*pending_);
        pending_.reset();
        std::vector<Index> table;
        table.reserve(fn.table.size());
        for (Index x = 0; x < fn.table.size(); ++x) {
            if (!fn.table[x]) {
                fail_at(ErrorKind::MissingMapping, fn.line, fn.col,
                        "fn " + fn.name + " has no mapping for '" + fn.dom.render(x) + "'");
            }
            table.push_back(*fn.table[x]);
        }
        doc_.add(fn.name, FinFn(fn.dom, fn.cod, std::move(table)));
    }

    void decl_lens(const std::vector<Token>& t)
    {
        const std::string name = new_name(t);
        expect(t, 2, ":");
        const Token& src_tok = at(t, 3, "a source set");
        const FiniteSet& src = set_ref(src_tok);
        expect(t, 4, "->");
        const Token& dst_tok = at(t, 5, "a target set");
        const FiniteSet& dst = set_ref(dst_tok);
        auto args = keyed(t, 6, {"get", "put"});
        const FinFn& get = fn_ref(args["get"]);
        const FinFn& put = fn_ref(args["put"]);
        shape_check(get.dom() == src && get.cod() == dst, args["get"],
                    "get must map " + src_tok.text + " to " + dst_tok.text);
        shape_check(put.dom() == product({dst, src}) && put.cod() == src, args["put"],
                    "put must map " + dst_tok.text + " * " + src_tok.text + " to " + src_tok.text);
        doc_.add(name, AsymmetricLens(get, put));
    }

    void decl_span(const std::vector<Token>& t)
    {
        const std::string name = new_name(t);
        expect(t, 2, "=");
        const Token& left_tok = at(t, 3, "a lens");
        require_kind(left_tok, EntityKind::Lens);
        expect(t, 4, "<-");
        const Token& head_tok = at(t, 5, "a head set");
        const FiniteSet& head = set_ref(head_tok);
        expect(t, 6, "->");
        const Token& right_tok = at(t, 7, "a lens");
        require_kind(right_tok, EntityKind::Lens);
        no_trailing(t, 8);
        const AsymmetricLens& left = doc_.lens(left_tok.text);
        const AsymmetricLens& right = doc_.lens(right_tok.text);
        shape_check(left.src() == head, left_tok, "source of " + left_tok.text + " is not " + head_tok.text);
        shape_check(right.src() == head, right_tok, "source of " + right_tok.text + " is not " + head_tok.text);
        doc_.add(name, LensSpan(left, right));
    }

    void decl_learner(const std::vector<Token>& t)
    {
        const std::string name = new_name(t);
        expect(t, 2, ":");
        const Token& src_tok = at(t, 3, "a source set");
        const FiniteSet& src = set_ref(src_tok);
        expect(t, 4, "->");
        const Token& dst_tok = at(t, 5, "a target set");
        const FiniteSet& dst = set_ref(dst_tok);
        auto args = keyed(t, 6, {"params", "I", "U", "r"});
        const FiniteSet& params = set_ref(args["params"]);
        const FinFn& impl = fn_ref(args["I"]);
        const FinFn& update = fn_ref(args["U"]);
        const FinFn& request = fn_ref(args["r"]);
        const FiniteSet tri = product({dst, params, src});
        shape_check(impl.dom() == product({params, src}) && impl.cod() == dst, args["I"],
                    "I must map params * " + src_tok.text + " to " + dst_tok.text);
        shape_check(update.dom() == tri && update.cod() == params, args["U"],
                    "U must map " + dst_tok.text + " * params * " + src_tok.text + " to params");
        shape_check(request.dom() == tri && request.cod() == src, args["r"],
                    "r must map " + dst_tok.text + " * params * " + src_tok.text + " to " + src_tok.text);
        doc_.add(name, Learner(params, impl, update, request));
    }

    std::string_view text_;
    std::string source_;
    std::size_t line_no_ = 0;
    std::optional<PendingFn> pending_;
    SpecDocument doc_;
};

} // namespace

SpecDocument parse_spec_text(std::string_view text, const std::string& source)
{
    return Parser(text, source).run();
}

SpecDocument parse_spec(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_text(buffer.str(), path.string());
}

// ---------------------------------------------------------------------------
// Writer

namespace {

void check_label(const std::string& label)
{
    bool ok = !label.empty() && label[0] != '#' && label != "=>" && label != ":";
    for (char c : label) {
        ok = ok && !std::isspace(static_cast<unsigned char>(c));
    }
    if (!ok) {
        throw Error(ErrorKind::ShapeError, "label '" + label + "' cannot be written in the text format");
    }
}

} // namespace

std::string SpecWriter::fresh(const std::string& hint)
{
    std::string name = hint;
    for (int n = 1; taken_.count(name) != 0 || reserved_.count(name) != 0; ++n) {
        name = hint + "_" + std::to_string(n);
    }
    taken_.insert(name);
    return name;
}

std::string SpecWriter::claim(const std::string& name)
{
    if (reserved_.erase(name) != 0) {
        taken_.insert(name);
        return name;
    }
    return fresh(name);
}

std::string SpecWriter::add_set(const FiniteSet& s, const std::string& hint)
{
    for (const auto& [known, name] : sets_) {
        if (known == s) {
            return name;
        }
    }
    std::string line;
    if (s.is_product()) {
        std::vector<std::string> names;
        for (const auto& f : s.factors()) {
            names.push_back(add_set(f, "S"));
        }
        const std::string name = fresh(hint);
        line = "prod " + name + " =";
        for (std::size_t i = 0; i < names.size(); ++i) {
            line += (i == 0 ? " " : " * ") + names[i];
        }
        sets_.emplace_back(s, name);
    } else {
        const std::string name = fresh(hint);
        line = "set " + name + " :";
        for (const auto& label : s.labels()) {
            check_label(label);
            line += " " + label;
        }
        sets_.emplace_back(s, name);
    }
    out_ += line + "\n";
    return sets_.back().second;
}

std::string SpecWriter::add_fn(const FinFn& f, const std::string& hint)
{
    for (const auto& [known, name] : fns_) {
        if (known == f) {
            return name;
        }
    }
    const std::string dom = add_set(f.dom(), "S");
    const std::string cod = add_set(f.cod(), "S");
    const std::string name = fresh(hint);
    out_ += "fn " + name + " : " + dom + " -> " + cod + "\n";
    for (Index x = 0; x < f.dom().size(); ++x) {
        out_ += "  " + f.dom().render(x) + " => " + f.cod().render(f(x)) + "\n";
    }
    fns_.emplace_back(f, name);
    return name;
}

std::string SpecWriter::add_lens(const AsymmetricLens& l, const std::string& name)
{
    const std::string get = add_fn(l.get(), name + "_get");
    const std::string put = add_fn(l.put(), name + "_put");
    const std::string src = add_set(l.src(), "S");
    const std::string dst = add_set(l.dst(), "S");
    const std::string own = claim(name);
    lenses_.emplace_back(l, own);
    out_ += "lens " + own + " : " + src + " -> " + dst + " get=" + get + " put=" + put + "\n";
    return own;
}

std::string SpecWriter::add_span(const LensSpan& s, const std::string& name)
{
    auto leg = [&](const AsymmetricLens& l, const std::string& hint) {
        for (const auto& [known, known_name] : lenses_) {
            if (known == l) {
                return known_name;
            }
        }
        return add_lens(l, hint);
    };
    const std::string left = leg(s.left(), name + "_left");
    const std::string right = leg(s.right(), name + "_right");
    const std::string head = add_set(s.head(), "S");
    const std::string own = claim(name);
    out_ += "span " + own + " = " + left + " <- " + head + " -> " + right + "\n";
    return own;
}

std::string SpecWriter::add_learner(const Learner& l, const std::string& name)
{
    const std::string params = add_set(l.params(), name + "_P");
    const std::string impl = add_fn(l.impl(), name + "_I");
    const std::string update = add_fn(l.update(), name + "_U");
    const std::string request = add_fn(l.request(), name + "_r");
    const std::string src = add_set(l.src(), "S");
    const std::string dst = add_set(l.dst(), "S");
    const std::string own = claim(name);
    out_ += "learner " + own + " : " + src + " -> " + dst + " params=" + params + " I=" + impl + " U=" + update
            + " r=" + request + "\n";
    return own;
}

std::string write_spec(const SpecDocument& doc)
{
    // Top-level lenses, spans and learners keep their names; their
    // dependencies are renamed by the writer.
    SpecWriter w;
    for (const auto& name : doc.names()) {
        const EntityKind kind = doc.kind_of(name);
        if (kind != EntityKind::Set && kind != EntityKind::Fn) {
            w.reserve(name);
        }
    }
    for (const auto& name : doc.names()) {
        switch (doc.kind_of(name)) {
        case EntityKind::Set:
        case EntityKind::Fn: break;
        case EntityKind::Lens: w.add_lens(doc.lens(name), name); break;
        case EntityKind::Span: w.add_span(doc.span(name), name); break;
        case EntityKind::Learner: w.add_learner(doc.learner(name), name); break;
        }
    }
    return w.str();
}

} // namespace bilearn
