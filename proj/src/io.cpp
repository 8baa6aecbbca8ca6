#include "proxnag/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace proxnag {

namespace {

namespace fs = std::filesystem;

std::string format17(double v) {
  if (std::isnan(v)) throw InputError("csv write: NaN field rejected");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format17(*v) : std::string();
}

std::optional<double> parse_optional(const std::string& cell, long line) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    throw ParseError("csv: malformed number '" + cell + "' at line " +
                     std::to_string(line));
  return v;
}

double parse_required(const std::string& cell, long line) {
  const auto v = parse_optional(cell, line);
  if (!v)
    throw ParseError("csv: missing required field at line " +
                     std::to_string(line));
  return *v;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open for reading: " + path);
  return in;
}

}  // namespace

// --------------------------------------------------------------------------
// IDX
// --------------------------------------------------------------------------

IdxTensor load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("load_idx: cannot open " + path);

  auto fail = [&](const std::string& what, std::streamoff offset) {
    throw ParseError("load_idx: " + what + " at byte offset " +
                     std::to_string(offset) + " in " + path);
  };

  unsigned char header[4];
  in.read(reinterpret_cast<char*>(header), 4);
  if (in.gcount() != 4) fail("truncated header", in.gcount());
  if (header[0] != 0 || header[1] != 0) fail("bad magic", 0);
  if (header[2] != 0x08) fail("unsupported element type", 2);
  const int rank = header[3];
  if (rank < 1) fail("invalid rank", 3);

  IdxTensor tensor;
  tensor.dims.resize(rank);
  for (int i = 0; i < rank; ++i) {
    unsigned char be[4];
    in.read(reinterpret_cast<char*>(be), 4);
    if (in.gcount() != 4) fail("truncated dimension header", 4 + 4 * i);
    tensor.dims[i] = (Index(be[0]) << 24) | (Index(be[1]) << 16) |
                     (Index(be[2]) << 8) | Index(be[3]);
  }

  const Index count = tensor.element_count();
  tensor.payload.resize(static_cast<size_t>(count));
  in.read(reinterpret_cast<char*>(tensor.payload.data()), count);
  if (in.gcount() != count)
    fail("truncated payload", 4 + 4 * rank + in.gcount());
  return tensor;
}

ClassificationInstance to_features(const IdxTensor& images,
                                   const IdxTensor& labels) {
  if (labels.dims.size() != 1)
    throw InputError("to_features: labels must have rank 1");
  if (images.dims.size() < 2)
    throw InputError("to_features: images must have rank >= 2");
  if (images.dims[0] != labels.dims[0])
    throw InputError("to_features: image and label counts differ");

  const Index n = images.dims[0];
  Index d = 1;
  for (size_t i = 1; i < images.dims.size(); ++i) d *= images.dims[i];

  ClassificationInstance instance;
  instance.X.resize(n, d);
  instance.y.resize(n);
  int max_label = 0;
  for (Index i = 0; i < n; ++i) {
    instance.y[i] = labels.payload[static_cast<size_t>(i)];
    max_label = std::max(max_label, instance.y[i]);
    for (Index j = 0; j < d; ++j)
      instance.X(i, j) =
          static_cast<double>(images.payload[static_cast<size_t>(i * d + j)]) /
          255.0;
  }
  instance.classes = max_label + 1;
  return instance;
}

// --------------------------------------------------------------------------
// Trace CSV
// --------------------------------------------------------------------------

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << kTraceCsvHeader << '\n';
  for (const TraceRow& r : trace) {
    out << r.k << ',' << format17(r.F_x) << ',' << format17(r.F_v) << ','
        << format_optional(r.gap_x) << ',' << format_optional(r.gap_v) << ','
        << format_optional(r.V) << ',' << format_optional(r.X) << ','
        << format_optional(r.D) << ',' << format_optional(r.R) << ','
        << format_optional(r.M) << ',' << format_optional(r.lyap) << ','
        << format_optional(r.energy) << ',' << format17(r.elapsed_s) << '\n';
  }
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("trace csv: empty file " + path);
  if (line != kTraceCsvHeader)
    throw ParseError("trace csv: unexpected header in " + path);

  Trace trace;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 13)
      throw ParseError("trace csv: expected 13 fields at line " +
                       std::to_string(line_no));
    TraceRow r;
    r.k = static_cast<long>(parse_required(cells[0], line_no));
    r.F_x = parse_required(cells[1], line_no);
    r.F_v = parse_required(cells[2], line_no);
    r.gap_x = parse_optional(cells[3], line_no);
    r.gap_v = parse_optional(cells[4], line_no);
    r.V = parse_optional(cells[5], line_no);
    r.X = parse_optional(cells[6], line_no);
    r.D = parse_optional(cells[7], line_no);
    r.R = parse_optional(cells[8], line_no);
    r.M = parse_optional(cells[9], line_no);
    r.lyap = parse_optional(cells[10], line_no);
    r.energy = parse_optional(cells[11], line_no);
    r.elapsed_s = parse_required(cells[12], line_no);
    trace.push_back(std::move(r));
  }
  return trace;
}

void write_epoch_csv(const EpochTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << kEpochCsvHeader << '\n';
  for (const EpochRow& r : trace) {
    out << r.epoch << ',' << format17(r.objective) << ','
        << format17(r.data_fit) << ',' << format17(r.reg_term) << ','
        << format_optional(r.test_accuracy) << ',' << format17(r.sparsity)
        << ',' << format17(r.elapsed_s) << '\n';
  }
}

EpochTrace read_epoch_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("epoch csv: empty file " + path);
  if (line != kEpochCsvHeader)
    throw ParseError("epoch csv: unexpected header in " + path);

  EpochTrace trace;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 7)
      throw ParseError("epoch csv: expected 7 fields at line " +
                       std::to_string(line_no));
    EpochRow r;
    r.epoch = static_cast<long>(parse_required(cells[0], line_no));
    r.objective = parse_required(cells[1], line_no);
    r.data_fit = parse_required(cells[2], line_no);
    r.reg_term = parse_required(cells[3], line_no);
    r.test_accuracy = parse_optional(cells[4], line_no);
    r.sparsity = parse_required(cells[5], line_no);
    r.elapsed_s = parse_required(cells[6], line_no);
    trace.push_back(std::move(r));
  }
  return trace;
}

// --------------------------------------------------------------------------
// Dense matrices
// --------------------------------------------------------------------------

void write_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format17(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) row.push_back(parse_required(cell, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("matrix csv: ragged row at line " +
                       std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

void write_vector_csv(const Vector& v, const std::string& path) {
  std::ofstream out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << format17(v[i]) << '\n';
}

Vector read_vector_csv(const std::string& path) {
  Matrix m = read_matrix_csv(path);
  if (m.size() == 0) return Vector(0);
  if (m.cols() != 1) throw ParseError("vector csv: expected one column in " + path);
  return m.col(0);
}

// --------------------------------------------------------------------------
// Key=value files
// --------------------------------------------------------------------------

void write_keyvalues(const KeyValues& kv, const std::string& path) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
}

KeyValues read_keyvalues(const std::string& path) {
  std::ifstream in = open_in(path);
  KeyValues kv;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("key=value file: missing '=' at line " +
                       std::to_string(line_no) + " in " + path);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

// --------------------------------------------------------------------------
// Instance directories
// --------------------------------------------------------------------------

namespace {

void save_common(const Matrix& A, const Vector& b, const Vector& x_true,
                 const ReferenceSolution& ref, KeyValues meta,
                 const std::string& dir) {
  fs::create_directories(dir);
  write_matrix_csv(A, dir + "/A.csv");
  write_vector_csv(b, dir + "/b.csv");
  write_vector_csv(x_true, dir + "/x_true.csv");
  write_vector_csv(ref.x_star, dir + "/reference.csv");
  meta["n"] = std::to_string(A.rows());
  meta["d"] = std::to_string(A.cols());
  meta["F_star"] = format17(ref.F_star);
  meta["ref_residual"] = format17(ref.residual);
  meta["ref_method"] = ref.method;
  write_keyvalues(meta, dir + "/meta.txt");
}

}  // namespace

void save_instance_dir(const ElasticNetInstance& instance,
                       const ReferenceSolution& ref, const std::string& dir) {
  KeyValues meta;
  meta["problem"] = "elastic-net";
  meta["variant"] = instance.variant;
  meta["lambda1"] = format17(instance.lambda1);
  meta["lambda2"] = format17(instance.lambda2);
  meta["seed"] = std::to_string(instance.seed);
  meta["cond_target"] = format17(instance.cond_target);
  save_common(instance.A, instance.b, instance.x_true, ref, std::move(meta),
              dir);
}

void save_instance_dir(const GroupLassoInstance& instance,
                       const ReferenceSolution& ref, const std::string& dir) {
  KeyValues meta;
  meta["problem"] = "group-lasso";
  meta["variant"] = instance.variant;
  meta["lambda_g"] = format17(instance.lambda_g);
  meta["lambda2"] = format17(instance.lambda2);
  meta["group_size"] = std::to_string(instance.group_size);
  meta["seed"] = std::to_string(instance.seed);
  meta["cond_target"] = format17(instance.cond_target);
  std::string planted;
  for (Index g : instance.planted_groups) {
    if (!planted.empty()) planted += ';';
    planted += std::to_string(g);
  }
  meta["planted_groups"] = planted;
  save_common(instance.A, instance.b, instance.x_true, ref, std::move(meta),
              dir);
}

void save_instance_dir(const ClassificationInstance& instance,
                       const std::string& dir) {
  fs::create_directories(dir);
  write_matrix_csv(instance.X, dir + "/X.csv");
  Vector labels(instance.y.size());
  for (Index i = 0; i < labels.size(); ++i) labels[i] = instance.y[i];
  write_vector_csv(labels, dir + "/y.csv");
  KeyValues meta;
  meta["problem"] = "classification";
  meta["classes"] = std::to_string(instance.classes);
  meta["train_frac"] = format17(instance.train_frac);
  meta["val_frac"] = format17(instance.val_frac);
  meta["test_frac"] = format17(instance.test_frac);
  meta["seed"] = std::to_string(instance.seed);
  write_keyvalues(meta, dir + "/meta.txt");
}

LoadedInstance load_instance_dir(const std::string& dir) {
  LoadedInstance loaded;
  loaded.meta = read_keyvalues(dir + "/meta.txt");
  const std::string problem = loaded.meta.at("problem");
  Matrix A = read_matrix_csv(dir + "/A.csv");
  Vector b = read_vector_csv(dir + "/b.csv");
  const double lambda2 = std::stod(loaded.meta.at("lambda2"));

  std::shared_ptr<const Regularizer> reg;
  if (problem == "elastic-net") {
    reg = std::make_shared<L1Penalty>(std::stod(loaded.meta.at("lambda1")));
  } else if (problem == "group-lasso") {
    const Index group_size = std::stol(loaded.meta.at("group_size"));
    reg = std::make_shared<GroupL2Penalty>(
        std::stod(loaded.meta.at("lambda_g")),
        GroupPartition::contiguous(A.cols(), group_size));
  } else {
    throw ParseError("load_instance_dir: unknown problem '" + problem + "'");
  }

  loaded.problem = CompositeProblem(
      std::make_shared<LeastSquaresRidge>(std::move(A), std::move(b), lambda2),
      std::move(reg));

  ReferenceSolution ref;
  ref.x_star = read_vector_csv(dir + "/reference.csv");
  ref.F_star = std::stod(loaded.meta.at("F_star"));
  ref.residual = std::stod(loaded.meta.at("ref_residual"));
  ref.method = loaded.meta.at("ref_method");
  loaded.problem.reference = std::move(ref);
  return loaded;
}

ClassificationInstance load_classification_dir(const std::string& dir) {
  const KeyValues meta = read_keyvalues(dir + "/meta.txt");
  ClassificationInstance instance;
  instance.X = read_matrix_csv(dir + "/X.csv");
  Vector labels = read_vector_csv(dir + "/y.csv");
  instance.y.resize(labels.size());
  for (Index i = 0; i < labels.size(); ++i)
    instance.y[i] = static_cast<int>(labels[i]);
  instance.classes = std::stoi(meta.at("classes"));
  instance.train_frac = std::stod(meta.at("train_frac"));
  instance.val_frac = std::stod(meta.at("val_frac"));
  instance.test_frac = std::stod(meta.at("test_frac"));
  instance.seed = std::stoull(meta.at("seed"));
  return instance;
}

// --------------------------------------------------------------------------
// Certificate reports
// --------------------------------------------------------------------------

void write_certificate_report(const CertificateReport& report,
                              const std::string& path) {
  KeyValues kv;
  kv["a"] = format17(report.params.a);
  kv["mu_hat"] = format17(report.params.mu_hat);
  kv["L"] = format17(report.params.L);
  kv["mu_f"] = format17(report.params.mu_f);
  kv["mu_F"] = format17(report.params.mu_F);
  kv["b"] = format17(report.params.b);
  kv["beta"] = format17(report.params.beta);
  kv["c"] = format17(report.params.c);
  kv["c_lower"] = format17(report.params.c_lower);
  kv["c_upper"] = format17(report.params.c_upper);
  kv["theta"] = format17(report.params.theta);
  kv["theory_regime"] = report.outside_theory_regime ? "outside" : "inside";
  kv["contraction_violations"] =
      std::to_string(report.contraction_violations.size());
  kv["mismatch_violations"] = std::to_string(report.mismatch_violations.size());
  kv["convex_descent_violations"] =
      std::to_string(report.convex_descent_violations.size());
  kv["best_rate_ok"] = report.best_rate_ok ? "true" : "false";
  kv["ergodic_rate_ok"] = report.ergodic_rate_ok ? "true" : "false";
  kv["max_slack"] = format17(report.max_slack);
  kv["passed"] = report.passed() ? "true" : "false";
  write_keyvalues(kv, path);

  const size_t total = report.contraction_violations.size() +
                       report.mismatch_violations.size() +
                       report.convex_descent_violations.size();
  if (total > 0) {
    std::ofstream out = open_out(path + ".violations.csv");
    out << "k,kind,slack\n";
    auto dump = [&](const std::vector<Violation>& vs) {
      for (const Violation& v : vs)
        out << v.k << ',' << v.kind << ',' << format17(v.slack) << '\n';
    };
    dump(report.contraction_violations);
    dump(report.mismatch_violations);
    dump(report.convex_descent_violations);
  }
}

}  // namespace proxnag
