#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wavecho {

enum class NeuronModel : std::uint8_t { Presynaptic = 0, Postsynaptic = 1 };
enum class Architecture : std::uint8_t { Random = 0, Tonotopic = 1 };
enum class InputDomain : std::uint8_t { Time = 0, Frequency = 1 };
enum class NetworkSize : std::uint8_t { Small = 0, Large = 1 };

/// One of the 16 reservoir variants. The canonical string lists the digits in
/// the order neuron model, architecture, input domain, size ("0001", "1111").
struct NetworkCode {
  NeuronModel neuron_model = NeuronModel::Presynaptic;
  Architecture architecture = Architecture::Random;
  InputDomain input_domain = InputDomain::Time;
  NetworkSize size = NetworkSize::Small;

  std::string str() const;
  int unit_count() const { return size == NetworkSize::Small ? 32 : 128; }
  int num_fields() const { return size == NetworkSize::Small ? 1 : 4; }
  bool structured() const { return architecture == Architecture::Tonotopic; }
  bool spectral_input() const { return input_domain == InputDomain::Frequency; }

  static std::vector<NetworkCode> all();

  friend bool operator==(const NetworkCode&, const NetworkCode&) = default;
};

NetworkCode parse_code(std::string_view text);

inline constexpr int kDefaultColumnsPerField = 16;

struct TopologySpec {
  int num_fields = 1;
  int columns_per_field = kDefaultColumnsPerField;
  double membrane_time_constant = 1.0;  // seconds

  static constexpr int kNeuronsPerColumn = 2;

  int excitatory_count() const { return num_fields * columns_per_field; }
  int unit_count() const { return kNeuronsPerColumn * excitatory_count(); }
  void validate() const;
};

enum class NeuronKind : std::uint8_t { Excitatory, Inhibitory };

struct NeuronLabel {
  NeuronKind kind;
  int field;   // 0 is the core field, 1..3 belt fields
  int column;  // tonotopic position within the field
};

/// Field-level connectivity before combination. All blocks are
/// (num_fields*F) square; rows are targets, columns sources.
struct FieldBlocks {
  Eigen::MatrixXd ee;
  Eigen::MatrixXd ei;
  Eigen::MatrixXd ie;
  Eigen::MatrixXd ii;
};

struct Connectivity {
  NetworkCode code;
  std::uint64_t seed = 0;
  int columns_per_field = kDefaultColumnsPerField;
  double tau_m = 1.0;

  Eigen::MatrixXd W;  // combined, spectrally scaled
  Eigen::MatrixXd D;  // N x M
  std::vector<NeuronLabel> partition;

  // Present for tonotopic variants; W == scale * assemble_combined(*blocks, tau_m).
  std::optional<FieldBlocks> blocks;
  double scale = 1.0;

  int units() const { return static_cast<int>(W.rows()); }
  int inputs() const { return static_cast<int>(D.cols()); }
};

/// i.i.d. Uniform(-1,1) entries; not yet spectrally scaled.
Eigen::MatrixXd build_random_connectivity(int n, std::uint64_t seed);

/// Tonotopic core/belt blocks. Excitatory lateral weights decay as
/// exp(-d/(F/4)) within a field, excitatory-to-inhibitory as exp(-d/(F/16));
/// inhibitory projections are local (diagonal). Core and belt fields are
/// joined by jittered bands of half-width 1 around the matched column;
/// belt fields are not connected to each other.
FieldBlocks build_tonotopic_connectivity(const TopologySpec& spec, std::uint64_t seed);

/// (1/tau_m) * [[W_ee, -W_ei], [W_ie, -W_ii]]
Eigen::MatrixXd assemble_combined(const FieldBlocks& blocks, double tau_m);
Eigen::MatrixXd assemble_combined(const Eigen::MatrixXd& ee, const Eigen::MatrixXd& ei,
                                  const Eigen::MatrixXd& ie, const Eigen::MatrixXd& ii,
                                  double tau_m);

/// Largest eigenvalue magnitude.
double spectral_radius(const Eigen::MatrixXd& w);

/// W / spectral_radius(W). Throws DegenerateSpectrum for nilpotent input.
Eigen::MatrixXd spectral_scale(const Eigen::MatrixXd& w);

/// 1 for time-domain codes, 2F for frequency-domain codes.
int input_dimension(const NetworkCode& code, int columns_per_field = kDefaultColumnsPerField);

/// Neuron labels: the first half of the state is excitatory, the second half
/// inhibitory, each laid out field-major. Random variants use the same nominal
/// layout so the input routing is identical across architectures.
std::vector<NeuronLabel> nominal_partition(int n, int columns_per_field);

Eigen::MatrixXd build_input_matrix(const NetworkCode& code, int n, int m, std::uint64_t seed,
                                   double tau_m,
                                   int columns_per_field = kDefaultColumnsPerField);

/// Full construction for one code. tau_m is the membrane time constant
/// (1/alpha); it only affects the frequency-domain input scaling since W is
/// normalised afterwards.
Connectivity build_connectivity(const NetworkCode& code, std::uint64_t seed, double tau_m,
                                int columns_per_field = kDefaultColumnsPerField);

// Row-major CSV dump: a header line "N,M,code,seed" then N rows of W and
// N rows of D.
void write_connectivity_csv(std::ostream& out, const Connectivity& conn);
Connectivity read_connectivity_csv(std::istream& in);

}  // namespace wavecho
