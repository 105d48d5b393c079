#include "wsym_cli/located_json.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace wsym::cli {

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << file;
  if (line > 0) os << ":" << line;
  os << ": ";
  if (!pointer.empty()) os << pointer << ": ";
  os << message;
  return os.str();
}

namespace {

std::string join(const std::vector<Diagnostic>& d) {
  std::string s;
  for (const auto& x : d) s += (s.empty() ? "" : "\n") + x.str();
  return s;
}

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

/// Input iterator over a string that counts the newlines consumed.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, int* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  int* line_;
};

class LineRecorder : public nlohmann::json_sax<json> {
 public:
  LineRecorder(const int* line, std::map<std::string, int>* lines) : line_(line), lines_(lines) {}

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override {
    value();
    stack_.push_back({false, -1, {}});
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().key = k;
    // Keys record their own line so unknown-key errors point at them.
    lines_->emplace(pointer(), *line_);
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    value();
    stack_.push_back({true, -1, {}});
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool array;
    long index;
    std::string key;
  };

  bool value() {
    if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
    lines_->emplace(pointer(), *line_);
    return true;
  }

  std::string pointer() const {
    std::string p;
    for (const Frame& f : stack_) p += "/" + (f.array ? std::to_string(f.index) : escape(f.key));
    return p;
  }

  const int* line_;
  std::map<std::string, int>* lines_;
  std::vector<Frame> stack_;
};

}  // namespace

InputError::InputError(std::vector<Diagnostic> diags) : std::runtime_error(join(diags)), diags_(std::move(diags)) {}

LocatedJson LocatedJson::parse(const std::string& text, std::string file) {
  LocatedJson out;
  out.file_ = std::move(file);
  try {
    out.doc_ = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(Diagnostic{out.file_, line, "", msg});
  }
  int line = 1;
  LineRecorder rec(&line, &out.lines_);
  json::sax_parse(CountingIterator(text.data(), &line), CountingIterator(text.data() + text.size(), &line), &rec);
  return out;
}

LocatedJson LocatedJson::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(Diagnostic{path, 0, "", "cannot read file"});
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text, path);
}

int LocatedJson::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    if (const auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return 0;
    p = p.substr(0, p.rfind('/'));
  }
}

Diagnostic LocatedJson::at(const std::string& pointer, std::string message) const {
  return Diagnostic{file_, line_of(pointer), pointer, std::move(message)};
}

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + escape(key); }
std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

void Checker::error(const std::string& pointer, std::string message) {
  diags_.push_back(src_.at(pointer, std::move(message)));
}

void Checker::throw_if_errors() const {
  if (!diags_.empty()) throw InputError(diags_);
}

const json* Checker::get(const std::string& pointer) const {
  const json::json_pointer p(pointer);
  return src_.doc().contains(p) ? &src_.doc().at(p) : nullptr;
}

bool Checker::object(const std::string& pointer, const std::vector<std::string>& allowed) {
  const json* v = get(pointer);
  if (!v || !v->is_object()) {
    error(pointer, "expected an object");
    return false;
  }
  for (const auto& [k, _] : v->items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) error(child(pointer, k), "unknown key '" + k + "'");
  return true;
}

bool Checker::require(const std::string& pointer) {
  if (get(pointer)) return true;
  error(pointer, "missing required key");
  return false;
}

bool Checker::number(const std::string& pointer, bool positive) {
  const json* v = get(pointer);
  if (!v || !v->is_number()) {
    error(pointer, "expected a number");
    return false;
  }
  if (positive && !(v->get<double>() > 0.0)) {
    error(pointer, "must be strictly positive");
    return false;
  }
  return true;
}

bool Checker::integer(const std::string& pointer, long min_value) {
  const json* v = get(pointer);
  if (!v || !v->is_number_integer()) {
    error(pointer, "expected an integer");
    return false;
  }
  if (v->get<long>() < min_value) {
    error(pointer, "must be >= " + std::to_string(min_value));
    return false;
  }
  return true;
}

bool Checker::boolean(const std::string& pointer) {
  const json* v = get(pointer);
  if (!v || !v->is_boolean()) {
    error(pointer, "expected true or false");
    return false;
  }
  return true;
}

bool Checker::string_in(const std::string& pointer, const std::vector<std::string>& choices) {
  const json* v = get(pointer);
  if (!v || !v->is_string()) {
    error(pointer, "expected a string");
    return false;
  }
  if (std::find(choices.begin(), choices.end(), v->get<std::string>()) == choices.end()) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
    error(pointer, "'" + v->get<std::string>() + "' is not one of: " + list);
    return false;
  }
  return true;
}

bool Checker::number_array(const std::string& pointer, bool positive) {
  const json* v = get(pointer);
  if (!v || !v->is_array() || v->empty()) {
    error(pointer, "expected a non-empty array of numbers");
    return false;
  }
  bool good = true;
  for (std::size_t i = 0; i < v->size(); ++i) good = number(child(pointer, i), positive) && good;
  return good;
}

bool Checker::matrix(const std::string& pointer, int& rows, int& cols) {
  const json* v = get(pointer);
  if (!v || !v->is_array() || v->empty()) {
    error(pointer, "expected a matrix (array of rows)");
    return false;
  }
  rows = static_cast<int>(v->size());
  cols = -1;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const json& row = (*v)[i];
    if (!row.is_array()) {
      error(child(pointer, i), "matrix row must be an array");
      return false;
    }
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols) {
      error(child(pointer, i), "ragged matrix: row has " + std::to_string(row.size()) + " entries, expected " +
                                   std::to_string(cols));
      return false;
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        error(child(child(pointer, i), j), "matrix entry must be a number");
        return false;
      }
    }
  }
  return true;
}

}  // namespace wsym::cli
