#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "fibsite/cli.hpp"
#include "fibsite/errors.hpp"

namespace fibsite::cli {

namespace {

struct Token {
    std::string text;
    std::string origin;
    std::size_t line = 0;
    std::size_t column = 0;
};

[[noreturn]] void fail(const Token& t, const std::string& message) {
    throw ParseError(t.origin + ": " + message, t.line, t.column, t.text);
}

bool special_char(char c) {
    return c == ':' || c == '=' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == ';';
}

/// Whitespace-separated words plus the punctuation ": = { } [ ] , ; ->".
std::vector<Token> tokenize_line(const std::string& line, const std::string& origin, std::size_t number) {
    std::vector<Token> out;
    std::size_t column = 1;
    std::size_t i = 0;
    auto advance = [&]() {
        // columns count code points
        if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++column;
        ++i;
    };
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            advance();
            continue;
        }
        Token t{{}, origin, number, column};
        if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            t.text = "->";
            advance();
            advance();
        } else if (special_char(c)) {
            t.text = std::string(1, c);
            advance();
        } else {
            while (i < line.size()) {
                const char d = line[i];
                if (d == ' ' || d == '\t' || d == '\r' || d == '#' || special_char(d)) break;
                if (d == '-' && i + 1 < line.size() && line[i + 1] == '>') break;
                t.text.push_back(d);
                advance();
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// Cursor over the tokens of one statement.
class Line {
public:
    Line(std::vector<Token> tokens, Token end) : tokens_(std::move(tokens)), end_(std::move(end)) {}

    bool done() const { return pos_ == tokens_.size(); }
    const Token& peek() const { return done() ? end_ : tokens_[pos_]; }
    const Token& next() {
        if (done()) fail(end_, "unexpected end of line");
        return tokens_[pos_++];
    }
    const Token& word(const char* what) {
        const Token& t = next();
        if (t.text == "->" || (t.text.size() == 1 && special_char(t.text[0]))) fail(t, std::string("expected ") + what);
        return t;
    }
    void expect(const std::string& text) {
        const Token& t = next();
        if (t.text != text) fail(t, "expected '" + text + "'");
    }
    bool accept(const std::string& text) {
        if (!done() && tokens_[pos_].text == text) {
            ++pos_;
            return true;
        }
        return false;
    }
    void finish() {
        if (!done()) fail(peek(), "unexpected token");
    }

private:
    std::vector<Token> tokens_;
    Token end_;
    std::size_t pos_ = 0;
};

// Statements ------------------------------------------------------------------

struct MorDecl {
    Token name, source, target;
};
struct ComposeDecl {
    Token g, f, h;
};
struct InverseDecl {
    Token f, g;
};
struct CoverDecl {
    Token object;
    std::vector<Token> generators;
};
struct CategoryDecl {
    Token name;
    std::vector<Token> objects;
    std::vector<MorDecl> morphisms;
    std::vector<ComposeDecl> composites;
    std::vector<InverseDecl> inverses;
    std::vector<CoverDecl> covers;
};
struct AtCategory {
    Token object, category;
};
struct RestrictFunctor {
    Token alpha;
    std::vector<std::pair<Token, Token>> mapping;
};
struct PsheafDecl {
    Token name, over;
    std::vector<AtCategory> values;
    std::vector<RestrictFunctor> restrictions;
};
struct AtGroup {
    Token object;
    std::vector<std::pair<Token, BigInt>> orders;
};
struct RestrictMatrix {
    Token morphism;
    Token bracket;
    std::vector<std::vector<std::int64_t>> rows;
};
struct AbDecl {
    Token name, over;
    std::vector<AtGroup> values;
    std::vector<RestrictMatrix> restrictions;
};

struct Document {
    std::vector<CategoryDecl> categories;
    std::optional<PsheafDecl> psheaf;
    std::optional<AbDecl> ab;
};

bool plain_name(const std::string& s) { return s.find('.') == std::string::npos; }

BigInt parse_order(const Token& t) {
    if (t.text == "Z") return 0;
    if (t.text.rfind("Z/", 0) == 0 && t.text.size() > 2) {
        const std::string digits = t.text.substr(2);
        if (digits.find_first_not_of("0123456789") == std::string::npos) {
            const BigInt n(digits);
            if (n >= 1) return n;
        }
    }
    fail(t, "expected Z or Z/n with n >= 1");
}

std::int64_t parse_int(const Token& t) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t.text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != t.text.size()) fail(t, "expected an integer");
    return v;
}

enum class Block { none, category, psheaf, ab };

void parse_into(Document& doc, const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    Block block = Block::none;
    while (std::getline(in, raw)) {
        ++number;
        auto tokens = tokenize_line(raw, origin, number);
        if (tokens.empty()) continue;
        Line line(std::move(tokens), Token{"", origin, number, raw.size() + 1});
        const Token head = line.next();
        const std::string& kw = head.text;
        if (kw == "category") {
            CategoryDecl c;
            c.name = line.word("a category name");
            doc.categories.push_back(std::move(c));
            block = Block::category;
        } else if (kw == "objects" || kw == "mor" || kw == "compose" || kw == "inverse" || kw == "cover") {
            if (block != Block::category) fail(head, "'" + kw + "' outside a category block");
            auto& c = doc.categories.back();
            if (kw == "objects") {
                if (line.done()) fail(line.peek(), "expected object names");
                while (!line.done()) c.objects.push_back(line.word("an object name"));
            } else if (kw == "mor") {
                MorDecl m;
                m.name = line.word("a morphism name");
                line.expect(":");
                m.source = line.word("a source object");
                line.expect("->");
                m.target = line.word("a target object");
                c.morphisms.push_back(std::move(m));
            } else if (kw == "compose") {
                const Token gf = line.word("g.f");
                const auto dot = gf.text.find('.');
                if (dot == std::string::npos || dot == 0 || dot + 1 == gf.text.size() ||
                    gf.text.find('.', dot + 1) != std::string::npos) {
                    fail(gf, "expected g.f");
                }
                ComposeDecl d;
                d.g = gf;
                d.g.text = gf.text.substr(0, dot);
                d.f = gf;
                d.f.text = gf.text.substr(dot + 1);
                d.f.column += dot + 1;
                line.expect("=");
                d.h = line.word("a morphism name");
                c.composites.push_back(std::move(d));
            } else if (kw == "inverse") {
                InverseDecl d;
                d.f = line.word("a morphism name");
                line.expect("=");
                d.g = line.word("a morphism name");
                c.inverses.push_back(std::move(d));
            } else {
                CoverDecl d;
                d.object = line.word("an object name");
                line.expect("=");
                line.expect("{");
                while (!line.accept("}")) d.generators.push_back(line.word("a morphism name or '}'"));
                c.covers.push_back(std::move(d));
            }
        } else if (kw == "psheaf-cat") {
            if (doc.psheaf) fail(head, "a bundle declares at most one psheaf-cat");
            PsheafDecl p;
            p.name = line.word("a name");
            line.expect("over");
            p.over = line.word("a category name");
            doc.psheaf = std::move(p);
            block = Block::psheaf;
        } else if (kw == "abpresheaf") {
            if (doc.ab) fail(head, "a bundle declares at most one abpresheaf");
            AbDecl a;
            a.name = line.word("a name");
            line.expect("over");
            a.over = line.word("a category or psheaf-cat name");
            doc.ab = std::move(a);
            block = Block::ab;
        } else if (kw == "at" && block == Block::psheaf) {
            AtCategory a;
            a.object = line.word("an object of the site");
            line.expect("category");
            a.category = line.word("a category name");
            doc.psheaf->values.push_back(std::move(a));
        } else if (kw == "restrict" && block == Block::psheaf) {
            RestrictFunctor r;
            r.alpha = line.word("a morphism of the site");
            line.expect(":");
            line.expect("functor");
            while (!line.done()) {
                const Token from = line.word("an object or morphism");
                line.expect("->");
                const Token to = line.word("an object or morphism");
                r.mapping.emplace_back(from, to);
                if (!line.done()) line.expect(",");
            }
            doc.psheaf->restrictions.push_back(std::move(r));
        } else if (kw == "at" && block == Block::ab) {
            AtGroup a;
            a.object = line.word("an object");
            line.expect("group");
            while (!line.done()) {
                const Token& t = line.word("Z or Z/n");
                a.orders.emplace_back(t, parse_order(t));
            }
            doc.ab->values.push_back(std::move(a));
        } else if (kw == "restrict" && block == Block::ab) {
            RestrictMatrix r;
            r.morphism = line.word("a morphism");
            line.expect("matrix");
            r.bracket = line.peek();
            line.expect("[");
            if (!line.accept("]")) {
                do {
                    line.expect("[");
                    std::vector<std::int64_t> row;
                    if (!line.accept("]")) {
                        do {
                            row.push_back(parse_int(line.word("an integer")));
                        } while (line.accept(","));
                        line.expect("]");
                    }
                    r.rows.push_back(std::move(row));
                } while (line.accept(","));
                line.expect("]");
            }
            doc.ab->restrictions.push_back(std::move(r));
        } else if (kw == "at" || kw == "restrict") {
            fail(head, "'" + kw + "' outside a psheaf-cat or abpresheaf block");
        } else {
            fail(head, "unknown statement");
        }
        line.finish();
    }
}

// Resolution --------------------------------------------------------------------

[[noreturn]] void invalid(const Token& t, const std::string& message) {
    throw ValidationError(t.origin + ":" + std::to_string(t.line) + ":" + std::to_string(t.column) + ": " + message);
}

Index object_of(const FiniteCategory& c, const Token& t, const std::string& where) {
    const auto o = c.find_object(t.text);
    if (!o) fail(t, "unknown object of " + where);
    return *o;
}

Index morphism_of(const FiniteCategory& c, const Token& t, const std::string& where) {
    const auto m = c.find_morphism(t.text);
    if (!m) fail(t, "unknown morphism of " + where);
    return *m;
}

FiniteCategory build_category(const CategoryDecl& d) {
    CategoryBuilder b;
    const std::string where = "category " + d.name.text;
    for (const auto& o : d.objects) {
        if (!plain_name(o.text)) fail(o, "names may not contain '.'");
        try {
            b.add_object(o.text);
        } catch (const InputError& e) {
            fail(o, e.what());
        }
    }
    auto object = [&](const Token& t) {
        try {
            return b.object(t.text);
        } catch (const InputError&) {
            fail(t, "unknown object of " + where);
        }
    };
    for (const auto& m : d.morphisms) {
        if (!plain_name(m.name.text)) fail(m.name, "names may not contain '.'");
        const Index s = object(m.source);
        const Index t = object(m.target);
        try {
            b.add_morphism(m.name.text, s, t);
        } catch (const InputError& e) {
            fail(m.name, e.what());
        }
    }
    auto morphism = [&](const Token& t) {
        try {
            return b.morphism(t.text);
        } catch (const InputError&) {
            fail(t, "unknown morphism of " + where);
        }
    };
    struct Entry {
        Index h;
        const Token* at;
        bool from_inverse;
    };
    std::map<std::pair<Index, Index>, Entry> table;
    std::vector<std::string> names;
    auto name = [&](Index m) { return names.at(m); };
    {
        // names by index, for messages
        std::map<Index, std::string> by_index;
        for (const auto& o : d.objects) by_index[b.identity(b.object(o.text))] = "id_" + o.text;
        for (const auto& m : d.morphisms) by_index[b.morphism(m.name.text)] = m.name.text;
        for (const auto& [i, n] : by_index) names.push_back(n);
    }
    auto record = [&](Index g, Index f, Index h, const Token& at, bool from_inverse) {
        auto [it, fresh] = table.emplace(std::make_pair(g, f), Entry{h, &at, from_inverse});
        if (fresh || it->second.h == h) return;
        const std::string composite = name(g) + "." + name(f);
        if (from_inverse || it->second.from_inverse) {
            invalid(at, "inverse law: " + composite + " is declared as both " + name(it->second.h) + " and " + name(h));
        }
        invalid(at, "composite " + composite + " declared twice with different values");
    };
    for (const auto& c : d.composites) {
        const Index g = morphism(c.g);
        const Index f = morphism(c.f);
        const Index h = morphism(c.h);
        try {
            b.set_compose(g, f, h);
        } catch (const InputError& e) {
            invalid(c.g, e.what());
        }
        record(g, f, h, c.h, false);
    }
    std::set<Index> has_inverse;
    for (const auto& inv : d.inverses) {
        const Index f = morphism(inv.f);
        const Index g = morphism(inv.g);
        FiniteCategory partial = b.build();
        if (partial.source(f) != partial.target(g) || partial.target(f) != partial.source(g)) {
            invalid(inv.f, "inverse law: " + inv.g.text + " does not go back along " + inv.f.text);
        }
        const Index id_a = partial.identity(partial.source(f));
        const Index id_b = partial.identity(partial.target(f));
        record(g, f, id_a, inv.g, true);
        record(f, g, id_b, inv.g, true);
        if (!partial.is_identity(g) || !partial.is_identity(f)) {
            b.set_compose(g, f, id_a);
            b.set_compose(f, g, id_b);
        }
        has_inverse.insert(f);
        has_inverse.insert(g);
    }
    FiniteCategory c = b.build();
    const auto report = validate_category(c);
    if (!report.ok()) invalid(d.name, where + ": " + report.violations.front());
    return c;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

Bundle resolve(const Document& doc) {
    Bundle b;
    if (doc.categories.empty()) throw ParseError("bundle declares no category", 1, 1, "");
    std::map<std::string, std::size_t> by_name;
    for (const auto& d : doc.categories) {
        if (!by_name.emplace(d.name.text, b.categories.size()).second) fail(d.name, "duplicate category name");
        b.category_names.push_back(d.name.text);
        b.categories.push_back(share(build_category(d)));
    }
    auto category = [&](const Token& t) {
        auto it = by_name.find(t.text);
        if (it == by_name.end()) fail(t, "unknown category");
        return it->second;
    };

    // the site: the base of the psheaf-cat, else the category carrying covers, else the first
    b.site = 0;
    if (doc.psheaf) {
        b.site = category(doc.psheaf->over);
    } else {
        for (std::size_t i = 0; i < doc.categories.size(); ++i) {
            if (!doc.categories[i].covers.empty()) {
                b.site = i;
                break;
            }
        }
    }
    const CategoryRef site = b.categories[b.site];
    std::vector<Sieve> sieves;
    for (std::size_t i = 0; i < doc.categories.size(); ++i) {
        for (const auto& cv : doc.categories[i].covers) {
            if (i != b.site) fail(cv.object, "covers must be declared on the site " + b.category_names[b.site]);
            Cover cover{object_of(*site, cv.object, "the site"), {}};
            for (const auto& g : cv.generators) {
                const Index m = morphism_of(*site, g, "the site");
                if (site->target(m) != cover.object) invalid(g, "cover generator " + g.text + " does not target " + cv.object.text);
                cover.generators.push_back(m);
            }
            sieves.push_back(sieve_from_generators(*site, cover.object, cover.generators));
            b.covers.push_back(std::move(cover));
        }
    }
    b.topology = sieves.empty() ? trivial_topology(site) : generate_topology(site, sieves);

    if (doc.psheaf) {
        const auto& p = *doc.psheaf;
        if (by_name.count(p.name.text)) fail(p.name, "name already used by a category");
        b.fibres_name = p.name.text;
        const std::string where = "psheaf-cat " + p.name.text;
        std::vector<std::optional<std::size_t>> value(site->object_count());
        for (const auto& at : p.values) {
            const Index u = object_of(*site, at.object, "the site");
            if (value[u]) fail(at.object, "second value for " + at.object.text);
            value[u] = category(at.category);
        }
        for (Index u = 0; u < site->object_count(); ++u) {
            if (!value[u]) fail(p.name, where + " has no value at " + site->object_name(u));
            b.fibre_of.push_back(*value[u]);
        }
        std::vector<std::optional<Functor>> along(site->morphism_count());
        for (const auto& r : p.restrictions) {
            const Index alpha = morphism_of(*site, r.alpha, "the site");
            if (along[alpha]) fail(r.alpha, "second restriction along " + r.alpha.text);
            const auto& from = b.categories[b.fibre_of[site->target(alpha)]];
            const auto& to = b.categories[b.fibre_of[site->source(alpha)]];
            Functor f{from, to, std::vector<Index>(from->object_count(), npos),
                      std::vector<Index>(from->morphism_count(), npos)};
            for (const auto& [x, y] : r.mapping) {
                if (const auto o = from->find_object(x.text)) {
                    if (f.object_map[*o] != npos) fail(x, "second image for " + x.text);
                    f.object_map[*o] = object_of(*to, y, "the restricted value");
                } else if (const auto m = from->find_morphism(x.text)) {
                    if (f.morphism_map[*m] != npos) fail(x, "second image for " + x.text);
                    f.morphism_map[*m] = morphism_of(*to, y, "the restricted value");
                } else {
                    fail(x, "unknown object or morphism of the value at " + site->object_name(site->target(alpha)));
                }
            }
            for (Index o = 0; o < from->object_count(); ++o) {
                if (f.object_map[o] == npos) invalid(r.alpha, "restrict " + r.alpha.text + ": no image for object " + from->object_name(o));
                const Index id = from->identity(o);
                if (f.morphism_map[id] == npos) f.morphism_map[id] = to->identity(f.object_map[o]);
            }
            for (Index m = 0; m < from->morphism_count(); ++m) {
                if (f.morphism_map[m] == npos) invalid(r.alpha, "restrict " + r.alpha.text + ": no image for morphism " + from->morphism_name(m));
            }
            along[alpha] = std::move(f);
        }
        std::vector<CategoryRef> values;
        for (Index u = 0; u < site->object_count(); ++u) values.push_back(b.categories[b.fibre_of[u]]);
        std::vector<Functor> restriction;
        for (Index alpha = 0; alpha < site->morphism_count(); ++alpha) {
            if (along[alpha]) {
                restriction.push_back(*along[alpha]);
            } else if (site->is_identity(alpha)) {
                restriction.push_back(identity_functor(values[site->source(alpha)]));
            } else {
                fail(p.name, where + " has no restriction along " + site->morphism_name(alpha));
            }
        }
        PresheafOfCategories a(site, std::move(values), std::move(restriction));
        const auto report = validate_presheaf_of_categories(a);
        if (!report.ok()) invalid(p.name, where + ": " + report.violations.front());
        b.fibres = share(std::move(a));
        b.fibred = grothendieck_construct(b.fibres);
    }

    if (doc.ab) {
        const auto& a = *doc.ab;
        if (by_name.count(a.name.text) || a.name.text == b.fibres_name) fail(a.name, "name already used");
        b.coefficients_name = a.name.text;
        b.coefficients_over = a.over.text;
        CategoryRef base;
        if (b.fibred && a.over.text == b.fibres_name) {
            base = b.fibred->total;
        } else {
            base = b.categories[category(a.over)];
        }
        const std::string where = "abpresheaf " + a.name.text;
        AbelianPresheaf f{base, std::vector<std::vector<BigInt>>(base->object_count()), {}};
        std::vector<bool> seen(base->object_count(), false);
        for (const auto& at : a.values) {
            const Index o = object_of(*base, at.object, a.over.text);
            if (seen[o]) fail(at.object, "second value for " + at.object.text);
            seen[o] = true;
            for (const auto& [t, n] : at.orders) f.orders[o].push_back(n);
        }
        for (Index o = 0; o < base->object_count(); ++o) {
            if (!seen[o]) fail(a.name, where + " has no value at " + base->object_name(o));
        }
        std::vector<std::optional<IntegerMatrix>> given(base->morphism_count());
        for (const auto& r : a.restrictions) {
            const Index m = morphism_of(*base, r.morphism, a.over.text);
            if (given[m]) fail(r.morphism, "second restriction along " + r.morphism.text);
            const std::size_t rows = f.orders[base->source(m)].size();
            const std::size_t cols = f.orders[base->target(m)].size();
            if (r.rows.size() != rows) {
                invalid(r.bracket, "restrict " + r.morphism.text + ": expected " + std::to_string(rows) + " rows");
            }
            IntegerMatrix mat(rows, cols);
            for (std::size_t i = 0; i < rows; ++i) {
                if (r.rows[i].size() != cols) {
                    invalid(r.bracket, "restrict " + r.morphism.text + ": expected " + std::to_string(cols) + " columns");
                }
                for (std::size_t j = 0; j < cols; ++j) mat.at(i, j) = r.rows[i][j];
            }
            given[m] = std::move(mat);
        }
        for (Index m = 0; m < base->morphism_count(); ++m) {
            if (given[m]) {
                f.restriction.push_back(*given[m]);
                continue;
            }
            // omitted restrictions between equal presentations are identities
            if (f.orders[base->source(m)] != f.orders[base->target(m)]) {
                fail(a.name, where + " has no restriction along " + base->morphism_name(m));
            }
            f.restriction.push_back(IntegerMatrix::identity(f.orders[base->source(m)].size()));
        }
        const auto report = validate_abelian_presheaf(f);
        if (!report.ok()) invalid(a.name, where + ": " + report.violations.front());
        b.coefficients = std::move(f);
    }
    return b;
}

std::string join_names(const FiniteCategory& c, const std::vector<Index>& ms) {
    std::string out;
    for (const Index m : ms) out += " " + c.morphism_name(m);
    return out;
}

}  // namespace

Bundle parse_bundle_text(const std::string& text, const std::string& origin) {
    Document doc;
    parse_into(doc, text, origin);
    Bundle b = resolve(doc);
    b.paths = {origin};
    b.content_hash = sha256_hex(text);
    return b;
}

Bundle parse_bundle(const std::vector<std::string>& paths) {
    if (paths.empty()) throw InputError("no bundle files given");
    Document doc;
    std::string all;
    for (const auto& p : paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw InputError("cannot read " + p);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string text = buffer.str();
        parse_into(doc, text, p);
        all += text;
    }
    Bundle b = resolve(doc);
    b.paths = paths;
    b.content_hash = sha256_hex(all);
    return b;
}

std::string emit_bundle(const Bundle& b) {
    std::ostringstream out;
    for (std::size_t i = 0; i < b.categories.size(); ++i) {
        const auto& c = *b.categories[i];
        if (i > 0) out << "\n";
        out << "category " << b.category_names[i] << "\n";
        out << "objects";
        for (const auto& o : c.object_names()) out << " " << o;
        out << "\n";
        for (Index m = 0; m < c.morphism_count(); ++m) {
            if (c.is_identity(m)) continue;
            out << "mor " << c.morphism_name(m) << " : " << c.object_name(c.source(m)) << " -> "
                << c.object_name(c.target(m)) << "\n";
        }
        for (Index g = 0; g < c.morphism_count(); ++g) {
            if (c.is_identity(g)) continue;
            for (Index f = 0; f < c.morphism_count(); ++f) {
                if (c.is_identity(f) || c.target(f) != c.source(g)) continue;
                out << "compose " << c.morphism_name(g) << "." << c.morphism_name(f) << " = "
                    << c.morphism_name(c.compose(g, f)) << "\n";
            }
        }
        if (i == b.site) {
            for (const auto& cv : b.covers) {
                out << "cover " << c.object_name(cv.object) << " = {" << join_names(c, cv.generators) << " }\n";
            }
        }
    }
    if (b.fibres) {
        const auto& site = b.site_category();
        out << "\npsheaf-cat " << b.fibres_name << " over " << b.category_names[b.site] << "\n";
        for (Index u = 0; u < site.object_count(); ++u) {
            out << "at " << site.object_name(u) << " category " << b.category_names[b.fibre_of[u]] << "\n";
        }
        for (Index alpha = 0; alpha < site.morphism_count(); ++alpha) {
            if (site.is_identity(alpha)) continue;
            const auto& f = b.fibres->along(alpha);
            out << "restrict " << site.morphism_name(alpha) << " : functor";
            bool first = true;
            auto item = [&](const std::string& x, const std::string& y) {
                out << (first ? " " : ", ") << x << " -> " << y;
                first = false;
            };
            for (Index o = 0; o < f.domain->object_count(); ++o) {
                item(f.domain->object_name(o), f.codomain->object_name(f.object_map[o]));
            }
            for (Index m = 0; m < f.domain->morphism_count(); ++m) {
                if (f.domain->is_identity(m)) continue;
                item(f.domain->morphism_name(m), f.codomain->morphism_name(f.morphism_map[m]));
            }
            out << "\n";
        }
    }
    if (b.coefficients) {
        const auto& f = *b.coefficients;
        const auto& c = *f.base;
        out << "\nabpresheaf " << b.coefficients_name << " over " << b.coefficients_over << "\n";
        for (Index o = 0; o < c.object_count(); ++o) {
            out << "at " << c.object_name(o) << " group";
            for (const auto& n : f.orders[o]) out << " " << (n == 0 ? std::string("Z") : "Z/" + n.str());
            out << "\n";
        }
        for (Index m = 0; m < c.morphism_count(); ++m) {
            if (c.is_identity(m)) continue;
            const auto& a = f.restriction[m];
            out << "restrict " << c.morphism_name(m) << " matrix [";
            for (std::size_t i = 0; i < a.rows(); ++i) {
                out << (i ? ",[" : "[");
                for (std::size_t j = 0; j < a.cols(); ++j) out << (j ? "," : "") << a.at(i, j).str();
                out << "]";
            }
            out << "]\n";
        }
    }
    return out.str();
}

bool same_bundle(const Bundle& a, const Bundle& b) {
    if (a.category_names != b.category_names || a.site != b.site || a.covers != b.covers) return false;
    for (std::size_t i = 0; i < a.categories.size(); ++i) {
        if (!(*a.categories[i] == *b.categories[i])) return false;
    }
    if (a.topology.covers != b.topology.covers) return false;
    if (a.fibres_name != b.fibres_name || a.fibre_of != b.fibre_of || bool(a.fibres) != bool(b.fibres)) return false;
    if (a.fibres) {
        for (Index alpha = 0; alpha < a.site_category().morphism_count(); ++alpha) {
            if (!same_maps(a.fibres->along(alpha), b.fibres->along(alpha))) return false;
        }
    }
    if (a.coefficients_name != b.coefficients_name || a.coefficients_over != b.coefficients_over ||
        bool(a.coefficients) != bool(b.coefficients)) {
        return false;
    }
    if (a.coefficients) {
        if (a.coefficients->orders != b.coefficients->orders) return false;
        if (!(*a.coefficients->base == *b.coefficients->base)) return false;
        for (std::size_t m = 0; m < a.coefficients->restriction.size(); ++m) {
            if (!(a.coefficients->restriction[m] == b.coefficients->restriction[m])) return false;
        }
    }
    return true;
}

}  // namespace fibsite::cli
