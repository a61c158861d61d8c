#include "wavecho/topology.hpp"

#include "wavecho/csv.hpp"
#include "wavecho/error.hpp"
#include "wavecho/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace wavecho {

namespace {

constexpr std::uint64_t kStreamRandomW = 1;
constexpr std::uint64_t kStreamTonotopic = 2;
constexpr std::uint64_t kStreamInput = 3;

// Inter-field jitter bounds and band half-width.
constexpr double kJitterLo = 0.5;
constexpr double kJitterHi = 1.5;
constexpr int kBandHalfWidth = 1;

bool connected_fields(int a, int b) {
  // Core (0) talks to every belt field and back; belt fields are not linked.
  return a != b && (a == 0 || b == 0);
}

}  // namespace

std::string NetworkCode::str() const {
  std::string s(4, '0');
  s[0] = static_cast<char>('0' + static_cast<int>(neuron_model));
  s[1] = static_cast<char>('0' + static_cast<int>(architecture));
  s[2] = static_cast<char>('0' + static_cast<int>(input_domain));
  s[3] = static_cast<char>('0' + static_cast<int>(size));
  return s;
}

std::vector<NetworkCode> NetworkCode::all() {
  std::vector<NetworkCode> codes;
  for (int i = 0; i < 16; ++i) {
    NetworkCode c;
    c.neuron_model = static_cast<NeuronModel>((i >> 3) & 1);
    c.architecture = static_cast<Architecture>((i >> 2) & 1);
    c.input_domain = static_cast<InputDomain>((i >> 1) & 1);
    c.size = static_cast<NetworkSize>(i & 1);
    codes.push_back(c);
  }
  return codes;
}

NetworkCode parse_code(std::string_view text) {
  if (text.size() != 4) {
    throw Error(ErrorKind::InvalidCode,
                "network code must have 4 digits, got '" + std::string(text) + "'");
  }
  int digits[4];
  for (int i = 0; i < 4; ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw Error(ErrorKind::InvalidCode,
                  "network code digits must be 0 or 1, got '" + std::string(text) + "'");
    }
    digits[i] = text[i] - '0';
  }
  NetworkCode code;
  code.neuron_model = static_cast<NeuronModel>(digits[0]);
  code.architecture = static_cast<Architecture>(digits[1]);
  code.input_domain = static_cast<InputDomain>(digits[2]);
  code.size = static_cast<NetworkSize>(digits[3]);
  return code;
}

void TopologySpec::validate() const {
  if (num_fields != 1 && num_fields != 4) {
    throw Error(ErrorKind::UnsupportedTopology,
                "num_fields must be 1 or 4, got " + std::to_string(num_fields));
  }
  if (columns_per_field < 1) {
    throw Error(ErrorKind::UnsupportedTopology, "columns_per_field must be positive");
  }
  if (!(membrane_time_constant > 0.0)) {
    throw Error(ErrorKind::Configuration, "membrane time constant must be positive");
  }
}

Eigen::MatrixXd build_random_connectivity(int n, std::uint64_t seed) {
  if (n <= 0) throw Error(ErrorKind::EmptyNetwork, "reservoir needs at least one unit");
  Rng rng(seed);
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = uniform_open(rng, -1.0, 1.0);
  }
  return w;
}

FieldBlocks build_tonotopic_connectivity(const TopologySpec& spec, std::uint64_t seed) {
  spec.validate();
  const int f = spec.columns_per_field;
  const int e = spec.excitatory_count();
  const double lambda_e = f / 4.0;
  const double lambda_i = f / 16.0;

  FieldBlocks b;
  b.ee = Eigen::MatrixXd::Zero(e, e);
  b.ie = Eigen::MatrixXd::Zero(e, e);
  b.ei = Eigen::MatrixXd::Identity(e, e);
  b.ii = Eigen::MatrixXd::Identity(e, e);

  for (int field = 0; field < spec.num_fields; ++field) {
    const int base = field * f;
    for (int c = 0; c < f; ++c) {
      for (int cp = 0; cp < f; ++cp) {
        const double d = std::abs(c - cp);
        b.ee(base + c, base + cp) = std::exp(-d / lambda_e);
        b.ie(base + c, base + cp) = std::exp(-d / lambda_i);
      }
    }
  }

  Rng rng(seed);
  for (int target = 0; target < spec.num_fields; ++target) {
    for (int source = 0; source < spec.num_fields; ++source) {
      if (!connected_fields(target, source)) continue;
      for (int c = 0; c < f; ++c) {
        for (int cp = std::max(0, c - kBandHalfWidth); cp <= std::min(f - 1, c + kBandHalfWidth);
             ++cp) {
          const double d = std::abs(c - cp);
          b.ee(target * f + c, source * f + cp) =
              std::exp(-d / lambda_e) * uniform_open(rng, kJitterLo, kJitterHi);
        }
      }
    }
  }
  return b;
}

Eigen::MatrixXd assemble_combined(const Eigen::MatrixXd& ee, const Eigen::MatrixXd& ei,
                                  const Eigen::MatrixXd& ie, const Eigen::MatrixXd& ii,
                                  double tau_m) {
  const auto half = ee.rows();
  for (const auto* m : {&ee, &ei, &ie, &ii}) {
    if (m->rows() != half || m->cols() != half) {
      throw Error(ErrorKind::Shape, "field blocks must be square with equal size");
    }
  }
  if (!(tau_m > 0.0)) throw Error(ErrorKind::Configuration, "tau_m must be positive");
  Eigen::MatrixXd w(2 * half, 2 * half);
  w.topLeftCorner(half, half) = ee;
  w.topRightCorner(half, half) = -ei;
  w.bottomLeftCorner(half, half) = ie;
  w.bottomRightCorner(half, half) = -ii;
  return w / tau_m;
}

Eigen::MatrixXd assemble_combined(const FieldBlocks& blocks, double tau_m) {
  return assemble_combined(blocks.ee, blocks.ei, blocks.ie, blocks.ii, tau_m);
}

double spectral_radius(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw Error(ErrorKind::Shape, "spectral radius needs a square matrix");
  if (w.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(w, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateSpectrum, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd spectral_scale(const Eigen::MatrixXd& w) {
  const double radius = spectral_radius(w);
  const double norm = w.cwiseAbs().maxCoeff();
  if (!(radius > 1e-12 * std::max(1.0, norm))) {
    throw Error(ErrorKind::DegenerateSpectrum, "matrix has spectral radius 0");
  }
  return w / radius;
}

int input_dimension(const NetworkCode& code, int columns_per_field) {
  return code.spectral_input() ? 2 * columns_per_field : 1;
}

std::vector<NeuronLabel> nominal_partition(int n, int columns_per_field) {
  std::vector<NeuronLabel> labels;
  labels.reserve(n);
  const int half = n / 2;
  for (int j = 0; j < n; ++j) {
    const bool exc = j < half;
    const int local = exc ? j : j - half;
    labels.push_back({exc ? NeuronKind::Excitatory : NeuronKind::Inhibitory,
                      local / columns_per_field, local % columns_per_field});
  }
  return labels;
}

Eigen::MatrixXd build_input_matrix(const NetworkCode& code, int n, int m, std::uint64_t seed,
                                   double tau_m, int columns_per_field) {
  if (n <= 0) throw Error(ErrorKind::EmptyNetwork, "reservoir needs at least one unit");
  const int expected_m = input_dimension(code, columns_per_field);
  if (m != expected_m) {
    throw Error(ErrorKind::Configuration,
                "code " + code.str() + " expects input dimension " + std::to_string(expected_m) +
                    ", got " + std::to_string(m));
  }
  if (!(tau_m > 0.0)) throw Error(ErrorKind::Configuration, "tau_m must be positive");

  Rng rng(seed);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, m);
  const int f = columns_per_field;
  const int half = n / 2;

  if (!code.spectral_input() && !code.structured()) {
    for (int j = 0; j < n; ++j) d(j, 0) = uniform_open(rng, -1.0, 1.0);
    return d;
  }

  if (n % 2 != 0 || half < f) {
    throw Error(ErrorKind::Configuration,
                "core routing needs an even unit count of at least 2F");
  }

  if (!code.spectral_input()) {
    // Scalar drive broadcast onto the core excitatory columns.
    for (int c = 0; c < f; ++c) d(c, 0) = uniform_open(rng, -1.0, 1.0);
    return d;
  }

  // Real parts into core excitatory columns, imaginary parts into core
  // inhibitory columns, both tonotopically (diagonally) mapped.
  for (int c = 0; c < f; ++c) d(c, c) = uniform_open(rng, -1.0, 1.0) / tau_m;
  for (int c = 0; c < f; ++c) d(half + c, f + c) = uniform_open(rng, -1.0, 1.0) / tau_m;
  return d;
}

Connectivity build_connectivity(const NetworkCode& code, std::uint64_t seed, double tau_m,
                                int columns_per_field) {
  Connectivity conn;
  conn.code = code;
  conn.seed = seed;
  conn.columns_per_field = columns_per_field;
  conn.tau_m = tau_m;

  const int n = code.structured()
                    ? TopologySpec::kNeuronsPerColumn * code.num_fields() * columns_per_field
                    : code.unit_count();

  Eigen::MatrixXd raw;
  if (code.structured()) {
    TopologySpec spec{code.num_fields(), columns_per_field, tau_m};
    conn.blocks = build_tonotopic_connectivity(spec, derive_seed(seed, kStreamTonotopic));
    raw = assemble_combined(*conn.blocks, tau_m);
  } else {
    raw = build_random_connectivity(n, derive_seed(seed, kStreamRandomW));
  }
  const double radius = spectral_radius(raw);
  conn.W = spectral_scale(raw);
  conn.scale = 1.0 / radius;

  conn.D = build_input_matrix(code, n, input_dimension(code, columns_per_field),
                              derive_seed(seed, kStreamInput), tau_m, columns_per_field);
  conn.partition = nominal_partition(n, columns_per_field);
  return conn;
}

void write_connectivity_csv(std::ostream& out, const Connectivity& conn) {
  out << "N,M,code,seed\n";
  out << conn.units() << ',' << conn.inputs() << ',' << conn.code.str() << ',' << conn.seed
      << '\n';
  auto dump = [&](const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << csv::format_number(m(i, j));
      }
      out << '\n';
    }
  };
  dump(conn.W);
  dump(conn.D);
}

Connectivity read_connectivity_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::trim(line) != "N,M,code,seed") {
    throw Error(ErrorKind::Io, "connectivity dump: missing header");
  }
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "connectivity dump: missing sizes");
  const auto head = csv::split(line);
  if (head.size() != 4) throw Error(ErrorKind::Io, "connectivity dump: malformed size row");

  Connectivity conn;
  const auto n = static_cast<int>(csv::parse_integer(head[0]));
  const auto m = static_cast<int>(csv::parse_integer(head[1]));
  conn.code = parse_code(csv::trim(head[2]));
  conn.seed = static_cast<std::uint64_t>(std::stoull(std::string(csv::trim(head[3]))));

  auto load = [&](Eigen::MatrixXd& mat, int rows, int cols) {
    mat.resize(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (!std::getline(in, line)) throw Error(ErrorKind::Io, "connectivity dump: truncated");
      const auto cells = csv::split(line);
      if (static_cast<int>(cells.size()) != cols) {
        throw Error(ErrorKind::Io, "connectivity dump: wrong column count");
      }
      for (int j = 0; j < cols; ++j) mat(i, j) = csv::parse_number(cells[j]);
    }
  };
  load(conn.W, n, n);
  load(conn.D, n, m);
  conn.partition = nominal_partition(n, conn.columns_per_field);
  return conn;
}

}  // namespace wavecho
