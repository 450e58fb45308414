//! Registry of check ids: the formula each check certifies, where the
//! statement lives, and a verbatim quote to search for.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub id: &'static str,
    /// Owning module schema.
    pub module: &'static str,
    pub formula: &'static str,
    pub location: &'static str,
    pub anchor: &'static str,
}

pub const PIPELINE: &str = "glcm-pipeline";
pub const QUASIHOM: &str = "quasihom-calculus";
pub const ELLIS: &str = "ellis-engine";
pub const SL2: &str = "sl2-cover";
pub const NONSTD: &str = "nonstd-oracle";

const fn e(id: &'static str, module: &'static str, formula: &'static str, location: &'static str, anchor: &'static str) -> Entry {
    Entry { id, module, formula, location, anchor }
}

const MAIN: &str = "theorem: main Theorem";
const UNIV: &str = "theorem: universality: existence";

pub static REGISTRY: &[Entry] = &[
    // Main theorem and its lemmas.
    e("f-identity", PIPELINE, "f(e) = e", "section: main theorem, quasi-homomorphisms", "Sometimes one assumes that $f(e_G)=e_H$, and this will be satisfied in our construction."),
    e("quasihom-error-c", PIPELINE, "error_r(f) ∪ error_l(f) ⊆ C", "definition: gen. loc. comp. model", "we write $f \\colon G \\to H : C$ if $\\error_r(f) \\cup \\error_l(f) \\subseteq C$"),
    e("thm-main-error-r", PIPELINE, "error_r(f) ⊆ (F̃₃ ∩ uM)/H(uM)", MAIN, "We will show more, namely that $\\error_r(f) \\subseteq (\\tilde{F}_{3} \\cap u\\M)/H(u\\M)$"),
    e("thm-main-error-l", PIPELINE, "error_l(f) ⊆ (F̃₃ ∩ uM)/H(uM)", MAIN, "Analogously, one can show that $\\error_l(f) \\subseteq (\\tilde{F}_3 \\cap u\\M)/H(u\\M)$"),
    e("thm-main-c-normal", PIPELINE, "C symmetric, normal, C ⊆ (F̃₁₀ ∩ uM)/H(uM)", MAIN, "contained in $(\\tilde{F}_{10} \\cap u\\M)/H(u\\M)$"),
    e("thm-main-c30", PIPELINE, "f⁻¹[C] ⊆ X³⁰", MAIN, "Moreover, $f^{-1}[C] \\subseteq X^{30}$"),
    e("thm-main-u14", PIPELINE, "f⁻¹[U] ⊆ X¹⁴", MAIN, "$f^{-1}[U] \\subseteq X^{14}$"),
    e("thm-main-uc34", PIPELINE, "f⁻¹[UC] ⊆ X³⁴", MAIN, "$f^{-1}[UC] \\subseteq X^{34}$"),
    e("thm-main-sep-l2", PIPELINE, "C²Y ∩ C²Z = ∅ ⇒ f⁻¹[Y], f⁻¹[Z] separated", MAIN, "which is witnessed by $l=2$"),
    e("rem-two-sets", PIPELINE, "C^lY ∩ C^lZ = ∅ ⇒ disjoint D₁ ⊇ f⁻¹[Y], D₂ ⊇ f⁻¹[Z] inside Xⁿ", "remark: separation by two sets", "didjoint definable subsets $D_1$ and $D_2$"),
    e("fact-generic-uc", PIPELINE, "X covered by finitely many left translates of f⁻¹[UC]", "fact: preimages of neighborhoods", "finitely many left translates"),
    e("rem-image-bound", PIPELINE, "cl(f[Xⁱ]) ⊆ cl(f[X])ⁱCⁱ⁻¹", "remark: i=1 is enough", "$\\cl(f[X^i]) \\subseteq \\cl(f[X])^iC^{i-1}$"),
    e("lem-fn-x2n", PIPELINE, "Fₙ ⊆ X²ⁿ", "lemma: F_n in X^2n", "$F_n \\subseteq \\bar X^{2n}$"),
    e("lem-u-in-f1", PIPELINE, "u ∈ F̃₁ ⊆ S_{X²}", "lemma: u in F_1", "$u \\in \\tilde{F}_1 \\subseteq S_{X^2,M}(N)$"),
    e("lem-inverse-shift", PIPELINE, "p ∈ F̃ₙ ∩ uM ⇒ p⁻¹ ∈ F̃ₙ₊₁ ∩ uM", "lemma: u in F_1", "$p^{-1} \\in \\tilde{F}_{n+1} \\cap u\\M$"),
    e("lem-preimage-n4", PIPELINE, "F⁻¹[S_{Xⁿ} ∩ uM] ⊆ Xⁿ⁺⁴", "lemma: u in F_1", "$F^{-1}[S_{X^n,M}(N) \\cap u\\M] \\subseteq X^{n+4}$"),
    e("lem-v-x4", PIPELINE, "V ⊆ S_{X⁴}", "lemma: existence of V", "$V\\subseteq S_{X^4,M}(N)$"),
    e("lem-conj-f8", PIPELINE, "(F̃₇ ∩ uM)^{uM} ⊆ F̃₈ ∩ uM ⊆ S_{X¹⁶}", "lemma: key properties of F_n's", "$(\\tilde{F}_7 \\cap u\\M)^{u\\M} \\subseteq \\tilde{F}_8 \\cap u\\M \\subseteq S_{X^{16},M}(N) \\cap u\\M$"),
    e("lem-closure-f9", PIPELINE, "cl_τ((F̃₇ ∩ uM)^{uM}) ⊆ F̃₉ ∩ uM ⊆ S_{X¹⁸}", "lemma: key properties of F_n's", "\\subseteq \\tilde{F}_9 \\cap u\\M \\subseteq  S_{X^{18},M}(N) \\cap u\\M"),
    e("lem-h-f3", PIPELINE, "H(uM) ⊆ F̃₃ ∩ uM ⊆ S_{X⁶}", "lemma: H(uM) form KrPi", "$H(u\\M) \\subseteq \\tilde{F}_3 \\cap u\\M \\subseteq S_{X^6,M}(N) \\cap u\\M$"),
    e("prop-fhat-f5", PIPELINE, "error_r(f̂) ∪ error_l(f̂) ⊆ (F̃₅ ∩ uM)/H(uM)", "proposition: error of hat f", "$\\error_r(\\hat{f}) \\cup \\error_l(\\hat{f}) \\subseteq (\\widetilde{F}_5 \\cap u\\mathcal{M})/H(u\\mathcal{M})$"),
    e("fhat-extends-f", PIPELINE, "f̂(tp(g)) = f(g)", "question: bar f = hat f", "$\\hat{f} (p) = p/ H(u\\mathcal{M})$ for all $p \\in u\\M$"),
    e("collapse-atom-action", PIPELINE, "g, g' in one atom ⇒ g·p = g'·p for every type p", "definition: circle operation", "we define $p \\circ Q$ as the set of all $r \\in S_{G,M}(N)$"),
    e("collapse-circle", PIPELINE, "u∘Q = uQ", "definition: circle operation", "such that $\\lim_i g_i =u$ and $\\lim_ig_iq_i = r$"),
    e("collapse-tau-discrete", PIPELINE, "cl_τ(Q) = Q for all Q ⊆ uM", "section: main theorem, tau closure", "the operator $\\cl_\\tau$ on subsets of $u\\M$ given by $\\cl_\\tau(Q):=(u\\M)\\cap (u\\circ Q)$ is a closure operator on $u\\M$"),
    e("collapse-h-trivial", PIPELINE, "H(uM) = {u}", "section: main theorem, tau topology", "Define $H(u\\M)$ as $\\bigcap \\cl_\\tau(V)$ with $V$ ranging over all $\\tau$-neighborhoods of $u$."),
    // Smaller error sets.
    e("alt-c22", PIPELINE, "C from F̃₃: f⁻¹[C] ⊆ X²²", "section: main theorem, remarks after the theorem", "our proofs yield $f^{-1}[C] \\subseteq X^{22}$"),
    e("alt-uc26", PIPELINE, "C from F̃₃: f⁻¹[UC] ⊆ X²⁶", "section: main theorem, remarks after the theorem", "$f^{-1}[UC] \\subseteq X^{26}$"),
    e("alt-sep-base3", PIPELINE, "least l separating for C from F̃₃ (evidence)", "section: main theorem, remarks after the theorem", "still holds for some $l$ (maybe greater than 2)"),
    e("alt-c18", PIPELINE, "C from F̃₁: f⁻¹[C] ⊆ X¹⁸", "section: main theorem, remarks after the theorem", "$f^{-1}[C] \\subseteq X^{18}$"),
    e("alt-sep-base1", PIPELINE, "least l separating for C from F̃₁ (evidence)", "section: main theorem, remarks after the theorem", "whether we could use yet smaller $C$"),
    e("q-fn-fm-sub", PIPELINE, "F̃ₙ * F̃ₘ ⊆ F̃ₙ₊ₘ", "section: main theorem, questions", "Does $\\widetilde{F}_n * \\widetilde{F}_m = \\widetilde{F}_{n+m}$?"),
    e("q-fn-fm-eq", PIPELINE, "F̃ₙ * F̃ₘ = F̃ₙ₊ₘ (evidence)", "section: main theorem, questions", "Does $(\\widetilde{F}_n \\cap u\\mathcal{M}) * (\\widetilde{F}_m \\cap u\\mathcal{M}) = \\widetilde{F}_{n+m} \\cap u\\mathcal{M}$?"),
    // Universality.
    e("univ-hstar-error", QUASIHOM, "h*: Ḡ → H : S^{4l+1}", UNIV, "$h^*\\colon \\bar G \\to H : S^{4l+1}$"),
    e("univ-hbar-error", QUASIHOM, "h̄: S_G(N) → H : S^{4l+1}", UNIV, "$\\bar h \\colon S_{G,M}(N) \\to H:S^{4l+1}$"),
    e("univ-hbar-extends", QUASIHOM, "h̄(tp(g)) ∈ h(g)S^{2l}", UNIV, "$\\bar h \\colon S_{G,M}(N) \\to H$ by $\\bar h(p):=h_M(p|_M)$"),
    e("univ-hbar-ugu", QUASIHOM, "h̄(ugu) ∈ h(g)S^{4(4l+1)}", UNIV, "$\\bar h(ugu) \\in h(g)S^{4(4l+1)}$"),
    e("univ-claim1-inverse", QUASIHOM, "h*(a⁻¹) ∈ h*(a)⁻¹S^{2(4l+1)}", UNIV, "$h^*(a^{-1}) \\in h^*(a)^{-1} S^{2(4l+1)}$"),
    e("univ-claim1-equiv", QUASIHOM, "a ≡ b ⇒ h*(ab⁻¹) ∈ S^{3(4l+1)}", UNIV, "$h^*(ab^{-1}) \\in S^{3(4l+1)}$ for every $a \\equiv_M b$"),
    e("univ-claim1-fn", QUASIHOM, "h*[Fₙ] ⊆ S^{(4n-1)(4l+1)}", UNIV, "$h^*[F_n] \\subseteq S^{(4n-1)(4l+1)}$"),
    e("univ-claim2", QUASIHOM, "h̃(p/H(uM)) ∈ h̄(p)S^{12(4l+1)}", UNIV, "$\\tilde{h} (p/H(u\\M)) \\in \\bar h(p)S^{12(4l+1)}$"),
    e("univ-htilde-error", QUASIHOM, "h̃: uM/H(uM) → H : S^{37(4l+1)}", UNIV, "$\\tilde{h} \\colon u\\M/H(u\\M) \\to H : S^{37(4l+1)}$"),
    e("univ-htilde-f", QUASIHOM, "h̃(f(g)) ∈ h(g)S^{16(4l+1)}", UNIV, "$\\tilde{h}(f(g)) \\in h(g)S^{16(4l+1)}$"),
    e("univ-htilde-c", QUASIHOM, "h̃[C] ⊆ S^{51(4l+1)}", UNIV, "$\\tilde{h}[C] \\subseteq S^{51(4l+1)}$"),
    e("univ-sep-m", QUASIHOM, "m = 56(4l+1)+2l separates", UNIV, "$m:=56(4l+1)+2l$ works"),
    e("univ-morphism", QUASIHOM, "h̃ ∈ Mor(f,h)", UNIV, "there exists a morphism $\\widetilde{h} \\in \\Mor(f,h)$"),
    e("univ-uniqueness-n", QUASIHOM, "ρ ∈ Mor(f,h) ⇒ ρ(p) ∈ h̃(p)Sⁿ, n = 4max(m₂, k+12(4l+1))", "theorem: universality uniqueness", "We will show that $n:=4\\max(m_2, k+12(4l+1))$ works"),
    e("glcm-self", QUASIHOM, "f: G → uM/H(uM) : C is a generalized locally compact model", "definition: gen. loc. comp. model", "A {\\em generalized definable locally compact model of $X$} is a quasi-homomorphism"),
    e("rem42-derived", QUASIHOM, "h[S^m] ⊆ T^{n_m}, n_m = mn+(m-1)e; m_j = k_j+m", "remark: on good quasi-homomorphisms", "$h[S^m] \\subseteq T^{n_m}$"),
    e("rem43-k", QUASIHOM, "k = 4k₂ + k₂n_{k₁}", "remark: morphisms yield a category", "$k:= 4k_2+k_2n_{k_1}$ works"),
    e("prop410-category", QUASIHOM, "ρ₂'ρ₁'(p) ∈ ρ₂ρ₁(p)S₃^{k₂'n_{l₁}+l₂+k₂'}", "section: universality, composition of equivalent morphisms", "S_3^{k_2'n_{l_1}+l_2+k_2'}"),
    e("equiv-laws", QUASIHOM, "~ on Mor(f,h) is reflexive, symmetric, transitive", "section: universality, equivalence of morphisms", "$\\sim$ is an equivalence relation on $\\Mor(f,h)$."),
    // Ellis decomposition.
    e("ellis-ideal-count", ELLIS, "number of minimal left ideals", "Ellis theorem", "$\\M $ is the disjoint union of the sets $u\\M $"),
    e("ellis-idempotents", ELLIS, "|J(M)| per minimal left ideal", "Ellis theorem", "with $u$ ranging over $J(\\M ):=\\{u \\in \\M: u^2=u\\}$"),
    e("ellis-group-iso", ELLIS, "uM is a group isomorphic to the structure group", "Ellis theorem", "$u\\M $ is a group with"),
    e("ellis-iso-witnesses", ELLIS, "uM ≅ vN for all ideals and idempotents", "Ellis theorem", "All the groups $u\\M $ (for $u \\in J(\\M )$) are isomorphic, even when we vary the minimal left ideal $\\M $."),
    // Universal cover of SL2.
    e("sl2-h-bb", SL2, "h(B,B) = 1", "subsection: universal cover of SL_2(R)", "h(B,B)=1"),
    e("sl2-h-b2b2", SL2, "h(B²,B²) = -1", "subsection: universal cover of SL_2(R)", "h(B^2,B^2)=-1"),
    e("sl2-b-squared", SL2, "B² = -I, B⁴ = I", "subsection: universal cover of SL_2(R)", "Then $B^2= -I$ and $B^4=I$."),
    e("sl2-b-fourth", SL2, "(B,0)⁴ = (I, 2h(B,B)+h(B²,B²)) = (I,1)", "subsection: universal cover of SL_2(R)", "(B,0)^{4}=(I, 2h(B,B) +h(B^2,B^2))=(I,1)"),
    e("sl2-cocycle-bbb", SL2, "h(a,b)+h(ab,c) = h(a,bc)+h(b,c) at (B,B,B)", "lemma: properties of h", "By the 2-cocycle formula"),
    e("sl2-cocycle-grid", SL2, "h(a,b)+h(ab,c) = h(a,bc)+h(b,c) on a grid", "lemma: properties of h", "By the 2-cocycle formula"),
    e("sl2-cocycle-random", SL2, "h(a,b)+h(ab,c) = h(a,bc)+h(b,c) on random samples", "lemma: properties of h", "By the 2-cocycle formula"),
    e("sl2-cover-unit", SL2, "(I,0) is neutral in SL₂ × Z", "subsection: universal cover of SL_2(R)", "(a_1,b_1)(a_2,b_2):= (a_1a_2,b_1+b_2+h(b_1,b_2))"),
    e("sl2-cover-assoc", SL2, "the cover product is associative", "subsection: universal cover of SL_2(R)", "(a_1,b_1)(a_2,b_2):= (a_1a_2,b_1+b_2+h(b_1,b_2))"),
    e("sl2-cover-inverse", SL2, "(a,b)⁻¹ = (a⁻¹, -b-h(a,a⁻¹))", "corollary: from Gismatullin", "h(a_i^{-1},b_i) = h(a_i,a_i^{-1})"),
    e("sl2-h-range", SL2, "im(h) = {-1,0,1}", "corollary: from Gismatullin", "As  $\\im(h) = \\{-1,0,1\\}$"),
    e("sl2-same-sign", SL2, "same type ⇒ h(aᵢ⁻¹,bᵢ) = h(aᵢ,aᵢ⁻¹)", "corollary: from Gismatullin", "have the same sign (because they have the same type)"),
    e("sl2-chain-696", SL2, "X¹⁴ → X⁵⁶ → X⁶⁷² → X⁶⁹⁶", "corollary: from Gismatullin", "X^{672+24}=X^{696}"),
    // Nonstandard sandwich computations.
    e("nonstd-l511-rotation", NONSTD, "u_G R u_G = u_G for the rotation by π/2", "lemma: u_G B u_G=u_G", "(2) is a particular case of (1)."),
    e("nonstd-l511-gamma-pos", NONSTD, "γ > 0 ⇒ u_G tp(B) u_G = u_G", "lemma: u_G B u_G=u_G", "$u_G\\tp(B/M)u_G=u_G=q_0$ if $\\gamma >0$"),
    e("nonstd-l511-gamma-neg", NONSTD, "γ < 0 ⇒ u_G tp(B) u_G = q₁", "lemma: u_G B u_G=u_G", "$u_G\\tp(B/M)u_G= q_1$ if $\\gamma<0$"),
    e("nonstd-l511-infinitesimal", NONSTD, "γ positive infinitesimal ⇒ u_G tp([-1,0;γ,-1]) u_G = q₁", "lemma: u_G B u_G=u_G", "u_G = q_1$ for all positive infinitesimals $\\gamma$."),
    e("nonstd-l58-1", NONSTD, "h(p,u_G) = 0", "lemma: properties of h", "$h(p,u_G)=0$ for all $p \\in S_G(M)$."),
    e("nonstd-l58-2", NONSTD, "h(u_G, tp(g)) = 0", "lemma: properties of h", "$h(u_G, \\tp(g/M))=0$ for all $g \\in G$."),
    e("nonstd-l58-3", NONSTD, "h(u_G, g u_G) = 0", "lemma: properties of h", "$h(u_G,gu_G) =0$ for all $g \\in G$."),
    e("nonstd-fixed-signs", NONSTD, "yb > 0 and the realizing parameters have their fixed signs", "lemma: properties of h", "Since $yb>0$"),
    e("nonstd-relations", NONSTD, "(1-x)² + y² = 1 with x, y positive infinitesimals", "lemma: formula for u_G p u_G", "$y$ positive with $(1-x)^2 + y^2 =1$"),
    e("nonstd-oracle", NONSTD, "tower sign = sign at an exact witness point", "lemma: u_G B u_G=u_G", "Observe that $\\gamma(1-x)b +\\delta yb >0$."),
    e("nonstd-order-closure", NONSTD, "b > R, c > dcl(R,b): signs closed under field operations", "lemma: formula for u_G p u_G", "where $b >\\R$, $c>\\dcl(\\R,b)$"),
];

pub fn lookup(id: &str) -> Result<&'static Entry> {
    REGISTRY.iter().find(|e| e.id == id).ok_or_else(|| Error::Unknown(format!("check id `{id}`")))
}

pub fn ids_of(module: &str) -> impl Iterator<Item = &'static str> + '_ {
    REGISTRY.iter().filter(move |e| e.module == module).map(|e| e.id)
}

pub fn render(e: &Entry) -> String {
    format!("{}  [{}]\nformula:  {}\nlocation: {}\nanchor:   {}\n", e.id, e.module, e.formula, e.location, e.anchor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_are_unique() {
        let mut seen = HashSet::new();
        for e in REGISTRY {
            assert!(seen.insert(e.id), "duplicate {}", e.id);
        }
    }

    #[test]
    fn c30_entry() {
        let e = lookup("thm-main-c30").unwrap();
        assert!(e.formula.contains("X³⁰"));
        assert_eq!(e.anchor, "Moreover, $f^{-1}[C] \\subseteq X^{30}$");
        assert!(lookup("rem43-k").unwrap().formula.contains("4k₂ + k₂n_{k₁}"));
        assert!(matches!(lookup("no-such-check"), Err(Error::Unknown(_))));
    }
}
