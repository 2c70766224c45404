import init, { segment, generate, score } from "./pkg/codemix_wasm.js";

const SAMPLE_CONLLU = `# sent_id = case1
# text = The cute boy is eating ice-cream in the car
1	The	the	DET	DT	_	3	det	_	_
2	cute	cute	ADJ	JJ	_	3	amod	_	_
3	boy	boy	NOUN	NN	_	5	nsubj	_	_
4	is	be	AUX	VBZ	_	5	aux	_	_
5	eating	eat	VERB	VBG	_	0	root	_	_
6	ice-cream	ice-cream	NOUN	NN	_	5	dobj	_	_
7	in	in	ADP	IN	_	9	case	_	_
8	the	the	DET	DT	_	9	det	_	_
9	car	car	NOUN	NN	_	5	nmod	_	_

# sent_id = case4
# text = Needs someone to explain lambda calculus
1	Needs	need	VERB	VBZ	_	0	root	_	_
2	someone	someone	PRON	NN	_	1	dobj	_	_
3	to	to	PART	TO	_	4	mark	_	_
4	explain	explain	VERB	VB	_	1	xcomp	_	_
5	lambda	lambda	NOUN	NN	_	6	compound	_	_
6	calculus	calculus	NOUN	NN	_	4	dobj	_	_
`;

const SAMPLE_LEXICON = `the cute boy is eating ice-cream	प्यारा लड़का आइसक्रीम खा रहा है
in the car	गाड़ी में
needs someone	किसी की ज़रूरत है
to explain lambda calculus	लैम्ब्डा कैलकुलस समझाने के लिए
`;

const SAMPLE_TAGGED = `gaadi/hin mein/hin the/eng boy/eng is/eng eating/eng ./other
I/eng love/eng this/eng movie/eng`;

const $ = (id) => document.getElementById(id);

function escape(text) {
  return text.replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c]);
}

function showError(target, err) {
  target.innerHTML = `<p class="error">${escape(String(err && err.message ? err.message : err))}</p>`;
}

function langClass(lang) {
  return lang === "eng" || lang === "other" ? lang : "native";
}

function renderSegments(records) {
  const rows = records.map((r) => {
    const words = r.text.split(" ");
    const spans = r.segments.map((s) =>
      `<span class="seg ${s.kind}" title="${s.kind}${s.case ? " (" + s.case + ")" : ""}">` +
      escape(words.slice(s.lo - 1, s.hi).join(" ")) + "</span>").join("");
    const notes = r.diagnostics.map(escape).join("<br>");
    return `<tr><td>${escape(r.id)}</td><td>${spans}</td><td>${notes}</td></tr>`;
  });
  return `<table><tr><th>id</th><th>segments</th><th>diagnostics</th></tr>${rows.join("")}</table>`;
}

function renderVariants(records) {
  const rows = records.map((r) => {
    const tokens = r.tokens.map((t) =>
      `<span class="${langClass(t.lang)}" title="${escape(t.lang)}">${escape(t.form)}</span>`).join(" ");
    return `<tr><td>${escape(r.id)}</td><td><code>${r.mask}</code></td><td>${tokens}</td>` +
      `<td>${r.cmi.toFixed(4)}</td><td>${r.i_index.toFixed(4)}</td></tr>`;
  });
  return `<p>${records.length} variants</p><table><tr><th>id</th><th>mask</th><th>text</th>` +
    `<th>CMI</th><th>I-index</th></tr>${rows.join("")}</table>`;
}

function renderScores(report) {
  const rows = report.utterances.map((u) =>
    `<tr><td>${escape(u.text)}</td><td>${u.cmi.toFixed(4)}</td><td>${u.i_index.toFixed(4)}</td>` +
    `<td>${u.class}</td></tr>`);
  const s = report.stats;
  return `<table><tr><th>utterance</th><th>CMI</th><th>I-index</th><th>class</th></tr>${rows.join("")}</table>` +
    `<p>C_avg ${s.c_avg.toFixed(4)}, mean I-index ${s.mean_i_index.toFixed(4)}, ` +
    `vocabulary ${s.total_vocabulary}</p>`;
}

async function main() {
  await init();
  $("conllu").value = SAMPLE_CONLLU;
  $("lexicon").value = SAMPLE_LEXICON;
  $("tagged").value = SAMPLE_TAGGED;

  $("segment").addEventListener("click", () => {
    const out = $("segment-out");
    try {
      out.innerHTML = renderSegments(JSON.parse(segment($("conllu").value)));
    } catch (err) {
      showError(out, err);
    }
  });

  $("generate").addEventListener("click", () => {
    const out = $("generate-out");
    try {
      const json = generate($("conllu").value, $("lexicon").value, $("target").value,
        $("policy").value, $("clause-only").checked);
      out.innerHTML = renderVariants(JSON.parse(json));
    } catch (err) {
      showError(out, err);
    }
  });

  $("score").addEventListener("click", () => {
    const out = $("score-out");
    try {
      out.innerHTML = renderScores(JSON.parse(score($("tagged").value)));
    } catch (err) {
      showError(out, err);
    }
  });
}

main().catch((err) => showError(document.body, err));
