#include "cfie/view.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "cfie/errors.hpp"

namespace cfie {

using nlohmann::ordered_json;

std::size_t ProgramView::address_taken_count() const {
    return static_cast<std::size_t>(
        std::count_if(functions.begin(), functions.end(),
                      [](const FunctionSignature& f) { return f.address_taken; }));
}

bool valid_view_label(std::string_view label) noexcept {
    return label == "source" || label == "binary-I" || label == "binary-II" ||
           label == "synthetic";
}

void validate_view(const ProgramView& view) {
    if (!valid_view_label(view.label))
        throw SchemaError("view label \"" + view.label +
                          "\" is not one of source/binary-I/binary-II/synthetic");

    std::unordered_set<std::string_view> fn_ids, fn_keys, cs_ids, cs_keys;
    for (const auto& fn : view.functions) {
        if (fn.fn_id.empty())
            throw SchemaError("function id must be non-empty");
        if (fn.link_key.empty())
            throw SchemaError("function \"" + fn.fn_id + "\" has an empty link_key");
        if (!fn_ids.insert(fn.fn_id).second)
            throw DuplicateIdError("duplicate function id \"" + fn.fn_id + "\"");
        if (!fn_keys.insert(fn.link_key).second)
            throw DuplicateIdError("duplicate function link_key \"" + fn.link_key + "\"");
    }
    for (const auto& cs : view.call_sites) {
        if (cs.cs_id.empty())
            throw SchemaError("call-site id must be non-empty");
        if (cs.link_key.empty())
            throw SchemaError("call-site \"" + cs.cs_id + "\" has an empty link_key");
        if (!cs_ids.insert(cs.cs_id).second)
            throw DuplicateIdError("duplicate call-site id \"" + cs.cs_id + "\"");
        // Binary-style views may legitimately carry several sites per key.
        if (view.label == "source" && !cs_keys.insert(cs.link_key).second)
            throw DuplicateIdError("duplicate call-site link_key \"" + cs.link_key +
                                   "\" in source view");
    }
}

namespace {

struct Context {
    const ParseOptions& options;
    std::vector<std::string>* warnings;

    void unknown_field(const std::string& where, const std::string& field) const {
        std::string msg = "unknown field \"" + field + "\" in " + where;
        if (!options.lenient)
            throw SchemaError(msg);
        if (warnings)
            warnings->push_back(msg);
    }
};

const ordered_json& require(const ordered_json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw SchemaError("missing field \"" + std::string(field) + "\" in " + where);
    return *it;
}

std::string require_string(const ordered_json& obj, const char* field, const std::string& where) {
    const auto& v = require(obj, field, where);
    if (!v.is_string())
        throw SchemaError("field \"" + std::string(field) + "\" in " + where +
                          " must be a string");
    return v.get<std::string>();
}

bool require_bool(const ordered_json& obj, const char* field, const std::string& where) {
    const auto& v = require(obj, field, where);
    if (!v.is_boolean())
        throw SchemaError("field \"" + std::string(field) + "\" in " + where +
                          " must be a boolean");
    return v.get<bool>();
}

TypeDescriptor parse_type_at(const std::string& text, const std::string& where) {
    try {
        return parse_type(text);
    } catch (const TypeGrammarError& e) {
        throw TypeGrammarError(where + ": " + e.what(), e.offset());
    }
}

std::vector<TypeDescriptor> parse_type_list(const ordered_json& obj, const char* field,
                                            const std::string& where) {
    const auto& v = require(obj, field, where);
    if (!v.is_array())
        throw SchemaError("field \"" + std::string(field) + "\" in " + where +
                          " must be an array of type strings");
    std::vector<TypeDescriptor> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string())
            throw SchemaError(where + "." + field + "[" + std::to_string(i) +
                              "] must be a type string");
        out.push_back(parse_type_at(v[i].get<std::string>(),
                                    where + "." + field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

void check_fields(const ordered_json& obj, std::initializer_list<std::string_view> known,
                  const std::string& where, const Context& ctx) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            ctx.unknown_field(where, key);
    }
}

FunctionSignature parse_function(const ordered_json& obj, std::size_t index, const Context& ctx) {
    std::string where = "functions[" + std::to_string(index) + "]";
    if (!obj.is_object())
        throw SchemaError(where + " must be an object");
    check_fields(obj, {"id", "link_key", "return", "params", "variadic", "address_taken"}, where,
                 ctx);
    FunctionSignature fn;
    fn.fn_id = require_string(obj, "id", where);
    fn.link_key = require_string(obj, "link_key", where);
    fn.return_type = parse_type_at(require_string(obj, "return", where), where + ".return");
    fn.params = parse_type_list(obj, "params", where);
    fn.variadic = require_bool(obj, "variadic", where);
    fn.address_taken = require_bool(obj, "address_taken", where);
    return fn;
}

CallSiteSignature parse_call_site(const ordered_json& obj, std::size_t index, const Context& ctx) {
    std::string where = "call_sites[" + std::to_string(index) + "]";
    if (!obj.is_object())
        throw SchemaError(where + " must be an object");
    check_fields(obj, {"id", "link_key", "expects_return", "args"}, where, ctx);
    CallSiteSignature cs;
    cs.cs_id = require_string(obj, "id", where);
    cs.link_key = require_string(obj, "link_key", where);
    cs.expects_return = parse_type_at(require_string(obj, "expects_return", where),
                                      where + ".expects_return");
    cs.args = parse_type_list(obj, "args", where);
    return cs;
}

// nlohmann reports byte offsets; diagnostics want line:column.
std::string line_col(std::string_view payload, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < payload.size(); ++i) {
        if (payload[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

} // namespace

ProgramView parse_view(std::string_view payload, const ParseOptions& options,
                       std::vector<std::string>* warnings) {
    ordered_json root;
    try {
        root = ordered_json::parse(payload);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("JSON parse error at " + line_col(payload, e.byte) + ": " + e.what());
    }
    if (!root.is_object())
        throw SchemaError("view payload must be a JSON object");

    Context ctx{options, warnings};
    check_fields(root, {"label", "functions", "call_sites"}, "view", ctx);

    ProgramView view;
    view.label = require_string(root, "label", "view");

    const auto& fns = require(root, "functions", "view");
    if (!fns.is_array())
        throw SchemaError("field \"functions\" must be an array");
    view.functions.reserve(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i)
        view.functions.push_back(parse_function(fns[i], i, ctx));

    const auto& css = require(root, "call_sites", "view");
    if (!css.is_array())
        throw SchemaError("field \"call_sites\" must be an array");
    view.call_sites.reserve(css.size());
    for (std::size_t i = 0; i < css.size(); ++i)
        view.call_sites.push_back(parse_call_site(css[i], i, ctx));

    validate_view(view);
    return view;
}

std::string serialize_view(const ProgramView& view) {
    ordered_json root;
    root["label"] = view.label;
    root["functions"] = ordered_json::array();
    for (const auto& fn : view.functions) {
        ordered_json j;
        j["id"] = fn.fn_id;
        j["link_key"] = fn.link_key;
        j["return"] = format_type(fn.return_type);
        ordered_json params = ordered_json::array();
        for (const auto& p : fn.params)
            params.push_back(format_type(p));
        j["params"] = std::move(params);
        j["variadic"] = fn.variadic;
        j["address_taken"] = fn.address_taken;
        root["functions"].push_back(std::move(j));
    }
    root["call_sites"] = ordered_json::array();
    for (const auto& cs : view.call_sites) {
        ordered_json j;
        j["id"] = cs.cs_id;
        j["link_key"] = cs.link_key;
        j["expects_return"] = format_type(cs.expects_return);
        ordered_json args = ordered_json::array();
        for (const auto& a : cs.args)
            args.push_back(format_type(a));
        j["args"] = std::move(args);
        root["call_sites"].push_back(std::move(j));
    }
    return root.dump(2) + "\n";
}

ProgramView load_view_file(const std::filesystem::path& path, const ParseOptions& options,
                           std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open view file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_view(buf.str(), options, warnings);
    } catch (const TypeGrammarError& e) {
        throw TypeGrammarError(path.string() + ": " + e.what(), e.offset());
    } catch (const DuplicateIdError& e) {
        throw DuplicateIdError(path.string() + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

} // namespace cfie
