#include "recad/script/interpreter.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <new>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <variant>
#include <vector>

namespace recad::script {

void check_limits(const ExecLimits& limits) {
  if (limits.max_steps <= 0 || limits.max_loop_iters <= 0 || limits.max_curves <= 0) {
    throw Error(ErrorCategory::kPrecondition, "execution limits must be positive");
  }
}

namespace {

// ---------------------------------------------------------------------------
// Runtime values. Builders have reference semantics like the host language:
// a loop added to a face and modified afterwards shows the modification.

struct ListValue;
struct LoopObj;
struct FaceObj;
struct SketchObj;
struct ModelObj;

enum class Builtin {
  kLoop, kFace, kSketch, kExtrude, kCADModel,
  kRange, kLen, kAbs, kMin, kMax, kFloat, kInt, kRound,
  kSin, kCos, kTan, kAsin, kAcos, kAtan, kAtan2, kSqrt, kRadians, kDegrees, kHypot,
};

struct MathModule {};

using Value = std::variant<std::monostate, double, bool, std::string, std::shared_ptr<const ListValue>,
                           std::shared_ptr<LoopObj>, std::shared_ptr<FaceObj>, std::shared_ptr<SketchObj>,
                           Extrude, std::shared_ptr<ModelObj>, Builtin, MathModule>;

struct ListValue {
  std::vector<Value> items;
};
struct LoopObj {
  LoopObj() { loop.closed = false; }
  Loop loop;
};
struct FaceObj {
  std::vector<std::shared_ptr<LoopObj>> loops;
};
struct SketchObj {
  Vec3 origin;
  Vec3 x_axis{1, 0, 0};
  Vec3 normal{0, 0, 1};
  std::vector<std::shared_ptr<FaceObj>> faces;
};
struct ModelObj {
  struct Entry {
    std::shared_ptr<SketchObj> sketch;
    Extrude extrude;
    BooleanOp op;
  };
  std::vector<Entry> pairs;
};

const std::map<std::string, Builtin, std::less<>>& builtins() {
  static const std::map<std::string, Builtin, std::less<>> table = {
      {"Loop", Builtin::kLoop},       {"Face", Builtin::kFace},     {"Sketch", Builtin::kSketch},
      {"Extrude", Builtin::kExtrude}, {"CADModel", Builtin::kCADModel}, {"range", Builtin::kRange},
      {"len", Builtin::kLen},         {"abs", Builtin::kAbs},       {"min", Builtin::kMin},
      {"max", Builtin::kMax},         {"float", Builtin::kFloat},   {"int", Builtin::kInt},
      {"round", Builtin::kRound},     {"sin", Builtin::kSin},       {"cos", Builtin::kCos},
      {"tan", Builtin::kTan},         {"asin", Builtin::kAsin},     {"acos", Builtin::kAcos},
      {"atan", Builtin::kAtan},       {"atan2", Builtin::kAtan2},   {"sqrt", Builtin::kSqrt},
      {"radians", Builtin::kRadians}, {"degrees", Builtin::kDegrees}, {"hypot", Builtin::kHypot},
  };
  return table;
}

bool is_math_function(Builtin b) { return b >= Builtin::kSin; }

std::string type_name(const Value& v) {
  switch (v.index()) {
    case 0: return "None";
    case 1: return "number";
    case 2: return "bool";
    case 3: return "str";
    case 4: return "list";
    case 5: return "Loop";
    case 6: return "Face";
    case 7: return "Sketch";
    case 8: return "Extrude";
    case 9: return "CADModel";
    case 10: return "function";
    default: return "module";
  }
}

std::string format_position(const Span& at) {
  std::ostringstream os;
  os << "line " << at.line << ", column " << at.column << ": ";
  return os.str();
}

class Interpreter {
 public:
  explicit Interpreter(const ExecLimits& limits) : limits_(limits) {}

  CADModel run(const ScriptAst& ast) {
    for (const StmtPtr& s : ast.statements) exec(*s);
    const auto it = vars_.find("cad_model");
    if (it == vars_.end()) {
      throw Error(ErrorCategory::kContract, "the script does not define `cad_model`");
    }
    const auto* model = std::get_if<std::shared_ptr<ModelObj>>(&it->second);
    if (model == nullptr) {
      throw Error(ErrorCategory::kContract, "`cad_model` is a " + type_name(it->second) + ", not a CADModel");
    }
    CADModel out = materialize(**model);
    require_valid(out);
    return out;
  }

 private:
  [[noreturn]] void fail(const Span& at, const std::string& msg) const {
    throw Error(ErrorCategory::kEvaluation, format_position(at) + msg);
  }
  [[noreturn]] void exhausted(const Span& at, const std::string& msg) const {
    throw Error(ErrorCategory::kResource, format_position(at) + msg);
  }

  void tick(const Span& at) {
    if (++steps_ > limits_.max_steps) {
      exhausted(at, "step limit of " + std::to_string(limits_.max_steps) + " exceeded");
    }
  }

  // -------------------------------------------------------------------------
  // Statements

  void exec(const Stmt& s) {
    tick(s.span);
    switch (s.kind) {
      case StmtKind::kImport:
        return;
      case StmtKind::kExpr:
        eval(*s.value);
        return;
      case StmtKind::kAssign:
        vars_[s.target] = eval(*s.value);
        return;
      case StmtKind::kAugAssign: {
        const Value current = lookup(s.target, s.span);
        const Value rhs = eval(*s.value);
        vars_[s.target] = arithmetic(s.op, current, rhs, s.span);
        return;
      }
      case StmtKind::kFor:
        exec_for(s);
        return;
    }
  }

  void exec_for(const Stmt& s) {
    double args[3] = {0.0, 0.0, 1.0};
    std::vector<double> given;
    for (const ExprPtr& e : s.range_args) given.push_back(integer(eval(*e), e->span, "range() argument"));
    if (given.size() == 1) {
      args[1] = given[0];
    } else {
      args[0] = given[0];
      args[1] = given[1];
      if (given.size() == 3) args[2] = given[2];
    }
    const double start = args[0], stop = args[1], step = args[2];
    if (step == 0.0) fail(s.span, "range() step must not be zero");
    for (double i = start; step > 0 ? i < stop : i > stop; i += step) {
      if (++loop_iters_ > limits_.max_loop_iters) {
        exhausted(s.span, "loop iteration limit of " + std::to_string(limits_.max_loop_iters) + " exceeded");
      }
      tick(s.span);
      vars_[s.target] = i;
      for (const StmtPtr& b : s.body) exec(*b);
    }
  }

  // -------------------------------------------------------------------------
  // Expressions

  Value lookup(const std::string& name, const Span& at) const {
    if (const auto it = vars_.find(name); it != vars_.end()) return it->second;
    if (name == "math") return MathModule{};
    if (name == "pi") return std::numbers::pi;
    if (const auto it = builtins().find(name); it != builtins().end()) return it->second;
    fail(at, "name '" + name + "' is not defined");
  }

  Value eval(const Expr& e) {
    tick(e.span);
    switch (e.kind) {
      case ExprKind::kNumber: return e.number;
      case ExprKind::kString: return e.text;
      case ExprKind::kBool: return e.flag;
      case ExprKind::kNone: return std::monostate{};
      case ExprKind::kName: return lookup(e.text, e.span);
      case ExprKind::kList: {
        auto list = std::make_shared<ListValue>();
        for (const ExprPtr& item : e.items) list->items.push_back(eval(*item));
        return std::shared_ptr<const ListValue>(std::move(list));
      }
      case ExprKind::kUnary: {
        const double v = number(eval(*e.items[0]), e.span, "operand of unary " + e.text);
        return e.text == "-" ? -v : v;
      }
      case ExprKind::kBinary: {
        const Value lhs = eval(*e.items[0]);
        const Value rhs = eval(*e.items[1]);
        return arithmetic(e.text, lhs, rhs, e.span);
      }
      case ExprKind::kAttribute: {
        const Value obj = eval(*e.items[0]);
        if (std::holds_alternative<MathModule>(obj)) return math_attribute(e.text, e.span);
        fail(e.span, "attribute '" + e.text + "' of " + type_name(obj) + " is not accessible");
      }
      case ExprKind::kSubscript: {
        const Value obj = eval(*e.items[0]);
        const auto* list = std::get_if<std::shared_ptr<const ListValue>>(&obj);
        if (list == nullptr) fail(e.span, type_name(obj) + " is not subscriptable");
        double index = integer(eval(*e.items[1]), e.span, "list index");
        const double n = static_cast<double>((*list)->items.size());
        if (index < 0) index += n;
        if (index < 0 || index >= n) fail(e.span, "list index out of range");
        return (*list)->items[static_cast<std::size_t>(index)];
      }
      case ExprKind::kCall:
        return call(e);
    }
    fail(e.span, "unknown expression");
  }

  Value math_attribute(const std::string& name, const Span& at) const {
    if (name == "pi") return std::numbers::pi;
    if (const auto it = builtins().find(name); it != builtins().end() && is_math_function(it->second)) {
      return it->second;
    }
    fail(at, "math has no attribute '" + name + "'");
  }

  double number(const Value& v, const Span& at, const std::string& what) const {
    if (const double* d = std::get_if<double>(&v)) return *d;
    if (const bool* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
    fail(at, what + " must be a number, not " + type_name(v));
  }

  double integer(const Value& v, const Span& at, const std::string& what) const {
    const double d = number(v, at, what);
    if (d != std::floor(d) || std::abs(d) > 9007199254740992.0) fail(at, what + " must be an integer");
    return d;
  }

  bool flag(const Value& v, const Span& at, const std::string& what) const {
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    if (const double* d = std::get_if<double>(&v)) return *d != 0.0;
    fail(at, what + " must be a bool, not " + type_name(v));
  }

  double checked(double r, const Span& at) const {
    if (std::isnan(r)) fail(at, "math domain error");
    if (!std::isfinite(r)) fail(at, "numeric overflow");
    return r;
  }

  Value arithmetic(const std::string& op, const Value& lhs, const Value& rhs, const Span& at) const {
    const bool numeric = (std::holds_alternative<double>(lhs) || std::holds_alternative<bool>(lhs)) &&
                         (std::holds_alternative<double>(rhs) || std::holds_alternative<bool>(rhs));
    if (!numeric) {
      fail(at, "unsupported operand types for " + op + ": " + type_name(lhs) + " and " + type_name(rhs));
    }
    const double a = number(lhs, at, "operand");
    const double b = number(rhs, at, "operand");
    if (op == "+") return checked(a + b, at);
    if (op == "-") return checked(a - b, at);
    if (op == "*") return checked(a * b, at);
    if (op == "/" || op == "//" || op == "%") {
      if (b == 0.0) fail(at, "division by zero");
      if (op == "/") return checked(a / b, at);
      if (op == "//") return checked(std::floor(a / b), at);
      const double m = std::fmod(a, b);
      return checked(m != 0.0 && ((m < 0) != (b < 0)) ? m + b : m, at);
    }
    if (op == "**") {
      if (a == 0.0 && b < 0.0) fail(at, "division by zero");
      if (a < 0.0 && b != std::floor(b)) fail(at, "fractional power of a negative number");
      return checked(std::pow(a, b), at);
    }
    fail(at, "unsupported operator " + op);
  }

  // -------------------------------------------------------------------------
  // Calls

  struct Args {
    std::vector<Value> positional;
    std::vector<std::pair<std::string, Value>> keywords;
    Span span;
  };

  // Binds arguments to named parameters; the first `required` must be given.
  std::vector<std::optional<Value>> bind(const Args& args, const std::string& fn,
                                         const std::vector<std::string>& params, std::size_t required) const {
    if (args.positional.size() > params.size()) {
      fail(args.span, fn + "() takes at most " + std::to_string(params.size()) + " arguments");
    }
    std::vector<std::optional<Value>> out(params.size());
    for (std::size_t i = 0; i < args.positional.size(); ++i) out[i] = args.positional[i];
    for (const auto& [name, value] : args.keywords) {
      std::size_t i = 0;
      while (i < params.size() && params[i] != name) ++i;
      if (i == params.size()) fail(args.span, fn + "() got an unexpected keyword argument '" + name + "'");
      if (out[i]) fail(args.span, fn + "() got multiple values for argument '" + name + "'");
      out[i] = value;
    }
    for (std::size_t i = 0; i < required; ++i) {
      if (!out[i]) fail(args.span, fn + "() missing required argument '" + params[i] + "'");
    }
    return out;
  }

  void no_keywords(const Args& args, const std::string& fn) const {
    if (!args.keywords.empty()) fail(args.span, fn + "() takes no keyword arguments");
  }

  Value call(const Expr& e) {
    const Expr& callee = *e.items[0];
    std::optional<Value> receiver;
    if (callee.kind == ExprKind::kAttribute) {
      tick(callee.span);
      receiver = eval(*callee.items[0]);
    }
    Value fn = receiver ? Value{} : eval(callee);
    Args args;
    args.span = e.span;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.positional.push_back(eval(*e.items[i]));
    for (const KeywordArg& kw : e.keywords) args.keywords.emplace_back(kw.name, eval(*kw.value));
    if (receiver) {
      if (std::holds_alternative<MathModule>(*receiver)) {
        fn = math_attribute(callee.text, callee.span);
      } else {
        return method(*receiver, callee.text, args);
      }
    }
    const Builtin* b = std::get_if<Builtin>(&fn);
    if (b == nullptr) fail(e.span, "'" + type_name(fn) + "' object is not callable");
    return call_builtin(*b, args);
  }

  Vec3 vec3(const Value& v, const Span& at, const std::string& what) const {
    const auto* list = std::get_if<std::shared_ptr<const ListValue>>(&v);
    if (list == nullptr || (*list)->items.size() != 3) fail(at, what + " must be a list of 3 numbers");
    const auto& items = (*list)->items;
    return {number(items[0], at, what), number(items[1], at, what), number(items[2], at, what)};
  }

  std::vector<double> numbers_of(const Args& args, const std::string& fn) const {
    std::vector<double> out;
    if (args.positional.size() == 1) {
      if (const auto* list = std::get_if<std::shared_ptr<const ListValue>>(&args.positional[0])) {
        for (const Value& v : (*list)->items) out.push_back(number(v, args.span, fn + "() argument"));
        if (out.empty()) fail(args.span, fn + "() of an empty list");
        return out;
      }
    }
    for (const Value& v : args.positional) out.push_back(number(v, args.span, fn + "() argument"));
    if (out.empty()) fail(args.span, fn + "() expects at least one argument");
    return out;
  }

  Value call_builtin(Builtin b, const Args& args) {
    const Span& at = args.span;
    auto unary_math = [&](const std::string& fn, double (*f)(double)) -> Value {
      no_keywords(args, fn);
      const auto a = bind(args, fn, {"x"}, 1);
      return checked(f(number(*a[0], at, fn + "() argument")), at);
    };
    switch (b) {
      case Builtin::kLoop:
        bind(args, "Loop", {}, 0);
        return std::make_shared<LoopObj>();
      case Builtin::kFace:
        bind(args, "Face", {}, 0);
        return std::make_shared<FaceObj>();
      case Builtin::kSketch: {
        const auto a = bind(args, "Sketch", {"origin", "x_axis", "normal"}, 0);
        auto s = std::make_shared<SketchObj>();
        if (a[0]) s->origin = vec3(*a[0], at, "origin");
        if (a[1]) s->x_axis = vec3(*a[1], at, "x_axis");
        if (a[2]) s->normal = vec3(*a[2], at, "normal");
        return s;
      }
      case Builtin::kExtrude: {
        const auto a = bind(args, "Extrude", {"distance"}, 1);
        if (const auto* list = std::get_if<std::shared_ptr<const ListValue>>(&*a[0])) {
          if ((*list)->items.size() != 2) fail(at, "Extrude distance must be a number or a pair");
          return Extrude{number((*list)->items[0], at, "extrusion distance"),
                         number((*list)->items[1], at, "extrusion distance")};
        }
        const double d = number(*a[0], at, "extrusion distance");
        return d >= 0.0 ? Extrude{d, 0.0} : Extrude{0.0, -d};
      }
      case Builtin::kCADModel:
        bind(args, "CADModel", {}, 0);
        return std::make_shared<ModelObj>();
      case Builtin::kRange:
        fail(at, "range() is only available as a for-loop iterable");
      case Builtin::kLen: {
        no_keywords(args, "len");
        const auto a = bind(args, "len", {"obj"}, 1);
        const auto* list = std::get_if<std::shared_ptr<const ListValue>>(&*a[0]);
        if (list == nullptr) fail(at, "object of type " + type_name(*a[0]) + " has no len()");
        return static_cast<double>((*list)->items.size());
      }
      case Builtin::kAbs: return unary_math("abs", [](double x) { return std::abs(x); });
      case Builtin::kFloat: return unary_math("float", [](double x) { return x; });
      case Builtin::kInt: return unary_math("int", [](double x) { return std::trunc(x); });
      case Builtin::kMin:
      case Builtin::kMax: {
        const std::string fn = b == Builtin::kMin ? "min" : "max";
        no_keywords(args, fn);
        const std::vector<double> xs = numbers_of(args, fn);
        double best = xs[0];
        for (double x : xs) best = b == Builtin::kMin ? std::min(best, x) : std::max(best, x);
        return best;
      }
      case Builtin::kRound: {
        no_keywords(args, "round");
        const auto a = bind(args, "round", {"x", "ndigits"}, 1);
        const double x = number(*a[0], at, "round() argument");
        const double digits = a[1] ? integer(*a[1], at, "round() ndigits") : 0.0;
        const double scale = std::pow(10.0, digits);
        return checked(std::nearbyint(x * scale) / scale, at);
      }
      case Builtin::kSin: return unary_math("sin", [](double x) { return std::sin(x); });
      case Builtin::kCos: return unary_math("cos", [](double x) { return std::cos(x); });
      case Builtin::kTan: return unary_math("tan", [](double x) { return std::tan(x); });
      case Builtin::kAsin: return unary_math("asin", [](double x) { return std::asin(x); });
      case Builtin::kAcos: return unary_math("acos", [](double x) { return std::acos(x); });
      case Builtin::kAtan: return unary_math("atan", [](double x) { return std::atan(x); });
      case Builtin::kSqrt: return unary_math("sqrt", [](double x) { return std::sqrt(x); });
      case Builtin::kRadians:
        return unary_math("radians", [](double x) { return x * std::numbers::pi / 180.0; });
      case Builtin::kDegrees:
        return unary_math("degrees", [](double x) { return x * 180.0 / std::numbers::pi; });
      case Builtin::kAtan2:
      case Builtin::kHypot: {
        const std::string fn = b == Builtin::kAtan2 ? "atan2" : "hypot";
        no_keywords(args, fn);
        const auto a = bind(args, fn, {"y", "x"}, 2);
        const double y = number(*a[0], at, fn + "() argument");
        const double x = number(*a[1], at, fn + "() argument");
        return checked(b == Builtin::kAtan2 ? std::atan2(y, x) : std::hypot(y, x), at);
      }
    }
    fail(at, "unknown function");
  }

  Value method(const Value& receiver, const std::string& name, const Args& args) {
    const Span& at = args.span;
    if (const auto* loop = std::get_if<std::shared_ptr<LoopObj>>(&receiver)) {
      loop_method(**loop, name, args);
      return receiver;
    }
    if (const auto* face = std::get_if<std::shared_ptr<FaceObj>>(&receiver)) {
      if (name != "addLoop") fail(at, "Face has no method '" + name + "'");
      no_keywords(args, name);
      for (const Value& v : args.positional) {
        const auto* l = std::get_if<std::shared_ptr<LoopObj>>(&v);
        if (l == nullptr) fail(at, "addLoop() expects Loop arguments, not " + type_name(v));
        (*face)->loops.push_back(*l);
      }
      return std::monostate{};
    }
    if (const auto* sketch = std::get_if<std::shared_ptr<SketchObj>>(&receiver)) {
      if (name != "addFace") fail(at, "Sketch has no method '" + name + "'");
      no_keywords(args, name);
      for (const Value& v : args.positional) {
        const auto* f = std::get_if<std::shared_ptr<FaceObj>>(&v);
        if (f == nullptr) fail(at, "addFace() expects Face arguments, not " + type_name(v));
        (*sketch)->faces.push_back(*f);
      }
      return std::monostate{};
    }
    if (const auto* model = std::get_if<std::shared_ptr<ModelObj>>(&receiver)) {
      if (name != "addSE") fail(at, "CADModel has no method '" + name + "'");
      const auto a = bind(args, name, {"sketch", "extrude", "boolean_op"}, 2);
      const auto* s = std::get_if<std::shared_ptr<SketchObj>>(&*a[0]);
      if (s == nullptr) fail(at, "addSE() sketch must be a Sketch, not " + type_name(*a[0]));
      const auto* ex = std::get_if<Extrude>(&*a[1]);
      if (ex == nullptr) fail(at, "addSE() extrude must be an Extrude, not " + type_name(*a[1]));
      BooleanOp op = BooleanOp::kNewBody;
      if (a[2]) {
        const auto* text = std::get_if<std::string>(&*a[2]);
        if (text == nullptr) fail(at, "addSE() boolean_op must be a string");
        if (!parse_boolean_op(*text, &op)) fail(at, "unknown boolean operation '" + *text + "'");
      }
      (*model)->pairs.push_back({*s, *ex, op});
      return std::monostate{};
    }
    fail(at, type_name(receiver) + " has no method '" + name + "'");
  }

  void add_curve(Loop& loop, CurveCmd curve, const Span& at) {
    if (++curves_ > limits_.max_curves) {
      exhausted(at, "curve limit of " + std::to_string(limits_.max_curves) + " exceeded");
    }
    if (loop.closed) fail(at, "cannot add curves to a closed loop");
    loop.curves.push_back(curve);
  }

  void loop_method(LoopObj& obj, const std::string& name, const Args& args) {
    const Span& at = args.span;
    Loop& loop = obj.loop;
    if (name == "moveTo") {
      const auto a = bind(args, name, {"x", "y"}, 2);
      if (!loop.curves.empty()) fail(at, "moveTo() must precede the curves of a loop");
      loop.start = {number(*a[0], at, "x"), number(*a[1], at, "y")};
    } else if (name == "lineTo") {
      const auto a = bind(args, name, {"x", "y", "relative"}, 2);
      add_curve(loop,
                Line{{number(*a[0], at, "x"), number(*a[1], at, "y")}, a[2] && flag(*a[2], at, "relative")},
                at);
    } else if (name == "arcTo") {
      const auto a = bind(args, name, {"x", "y", "degrees", "clockwise", "relative"}, 4);
      add_curve(loop,
                Arc{{number(*a[0], at, "x"), number(*a[1], at, "y")}, number(*a[2], at, "degrees"),
                    flag(*a[3], at, "clockwise"), a[4] && flag(*a[4], at, "relative")},
                at);
    } else if (name == "circle") {
      const auto a = bind(args, name, {"radius"}, 1);
      add_curve(loop, Circle{number(*a[0], at, "radius")}, at);
    } else if (name == "close") {
      bind(args, name, {}, 0);
      loop.closed = true;
    } else {
      fail(at, "Loop has no method '" + name + "'");
    }
  }

  static CADModel materialize(const ModelObj& m) {
    CADModel out;
    for (std::size_t i = 0; i < m.pairs.size(); ++i) {
      const auto& entry = m.pairs[i];
      SEPair pair;
      pair.sketch.origin = entry.sketch->origin;
      pair.sketch.x_axis = entry.sketch->x_axis;
      pair.sketch.normal = entry.sketch->normal;
      for (std::size_t j = 0; j < entry.sketch->faces.size(); ++j) {
        const FaceObj& f = *entry.sketch->faces[j];
        if (f.loops.empty()) {
          throw Error(ErrorCategory::kValidation, "pairs[" + std::to_string(i) + "].sketch.faces[" +
                                                      std::to_string(j) + "]: face has no loops");
        }
        Face face;
        face.outer = f.loops.front()->loop;
        for (std::size_t k = 1; k < f.loops.size(); ++k) face.holes.push_back(f.loops[k]->loop);
        pair.sketch.faces.push_back(std::move(face));
      }
      pair.extrude = entry.extrude;
      pair.op = entry.op;
      out.pairs.push_back(std::move(pair));
    }
    return out;
  }

  const ExecLimits limits_;
  std::unordered_map<std::string, Value> vars_;
  std::int64_t steps_ = 0;
  std::int64_t loop_iters_ = 0;
  std::int64_t curves_ = 0;
};

}  // namespace

CADModel execute(const ScriptAst& ast, const ExecLimits& limits) {
  check_limits(limits);
  return Interpreter(limits).run(ast);
}

CADModel run_script(std::string_view source, const ExecLimits& limits) {
  check_limits(limits);
  return execute(parse_script(source), limits);
}

ExecutionOutcome try_run_script(std::string_view source, const ExecLimits& limits) {
  ExecutionOutcome out;
  try {
    out.model = run_script(source, limits);
  } catch (const Error& e) {
    out.failure = e.category();
    out.message = e.what();
  } catch (const std::bad_alloc&) {
    out.failure = ErrorCategory::kResource;
    out.message = "out of memory";
  }
  return out;
}

}  // namespace recad::script
