#pragma once
#include <map>
#include <optional>
#include <vector>

#include "hopfcalc/bar.hpp"
#include "hopfcalc/graph.hpp"
#include "hopfcalc/linalg.hpp"

namespace hopfcalc {

// Which chain complex a context works in: words, or tree classes modulo the
// reversal and rotation relations.
enum class Flavor { bar, eil };

inline constexpr long kDefaultCap = 200000;

// Ordered basis of one (weight, internal degree) slice.
struct PieceBasis {
    int weight = 0;
    int internal = 0;
    std::vector<BarWord> words;
    std::map<BarWord, int> word_index;
    std::vector<Tree> trees; // quotient representatives
    std::map<Tree, int> tree_index;
    int dim() const {
        return static_cast<int>(words.size() + trees.size());
    }
};

// Finite-dimensional workspace for one model and flavor.  Enumerates pieces
// and flat total-degree slices on demand (subject to the dimension cap and
// optional weight cap), assembles differentials, and builds per-degree
// splittings  d s + s d = id - harmonic  used to push closed tensors onto
// closed-by-closed representatives.  Single-threaded, caches throughout.
class ChainContext {
  public:
    // weight_cap < 0 means uncapped.  Models carrying degree-1 symbols need a
    // weight cap before flat slices exist; pieces work either way.
    ChainContext(const Model* m, Flavor f, long cap = kDefaultCap,
                 int weight_cap = -1);

    const Model* model() const { return m_; }
    Flavor flavor() const { return flavor_; }
    long cap() const { return cap_; }
    int weight_cap() const { return weight_cap_; }
    RelationCache& relations() { return relations_; }

    const PieceBasis& piece(int weight, int internal);

    struct Flat {
        int total = 0;
        std::vector<std::pair<int, int>> items; // (weight, local index)
        std::map<std::pair<int, int>, int> pos;
        int dim() const { return static_cast<int>(items.size()); }
    };
    const Flat& flat(int total);

    // Differential between flat slices of total degree g and g+1.
    const SparseMat& d_flat(int g);
    int homology_rank(int g);

    // Chain <-> flat coordinates.  Chains must be homogeneous of the given
    // total degree and within the weight cap; tree chains are reduced to
    // quotient representatives first.
    SVec coords(int g, const BarChain& c);
    SVec coords(int g, const GraphChain& c);
    BarChain bar_chain(int g, const SVec& v);
    GraphChain graph_chain(int g, const SVec& v);

    // Splitting package.  harmonic(g, d v) = 0, harmonic lands in cycles, and
    // d(homotopy_s v) + homotopy_s(d v) = v - harmonic(v) holds exactly.
    SVec harmonic(int g, const SVec& v);
    SVec homotopy_s(int g, const SVec& v); // lands in degree g-1

    // Solve the letterwise differential within one weight: a chain b of
    // piece (weight, internal-1) with d_internal b = c, if one exists.
    std::optional<BarChain> internal_preimage(int weight, int internal,
                                              const BarChain& c);
    std::optional<GraphChain> internal_preimage(int weight, int internal,
                                                const GraphChain& c);

  private:
    struct Pack {
        Echelon im;  // image echelon, tags over degree g-1 coordinates
        Echelon ker; // cycle echelon
        std::vector<int> complement; // columns complementing the cycles
    };
    void ensure_package(int g);
    const SparseMat& d_int_matrix(int weight, int internal);

    const Model* m_;
    Flavor flavor_;
    long cap_;
    int weight_cap_;
    int mindeg_;
    RelationCache relations_;
    std::map<std::pair<int, int>, PieceBasis> pieces_;
    std::map<int, Flat> flats_;
    std::map<int, SparseMat> dmats_;
    std::map<int, int> dranks_;
    std::map<int, Pack> packs_;
    std::map<std::pair<int, int>, SparseMat> int_mats_;
};

// Tensor expansion helpers.
BarTensor tensor_of(const BarChain& a, const BarChain& b);
GraphTensor tensor_of(const GraphChain& a, const GraphChain& b);

// Push a closed tensor onto a sum of closed-by-closed terms.  The output
// satisfies  z - adjusted = d(certificate)  in the tensor complex whenever z
// is closed, with the differential acting as d(x)oy + (-1)^{deg x} xod(y).
struct BarKunneth {
    BarTensor adjusted;
    BarTensor certificate;
};
BarKunneth closed_kunneth_adjust(ChainContext& ctx, const BarTensor& z);

struct GraphKunneth {
    GraphTensor adjusted;
    GraphTensor certificate;
};
GraphKunneth closed_kunneth_adjust(ChainContext& ctx, const GraphTensor& z);

} // namespace hopfcalc
