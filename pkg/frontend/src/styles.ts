/** Injected stylesheet; layout classes are toggled by the controllers. */

export const STYLESHEET = `
:root {
  --panel-bg: #f7f5f1;
  --ink: #2b2620;
  --accent: #9a6a3f;
  --line: #d8d2c6;
}
* { box-sizing: border-box; }
body { margin: 0; font-family: Georgia, 'Times New Roman', serif; color: var(--ink); }

/* --- creator: data panel | slide editor | story flow --- */
.creator {
  display: grid;
  grid-template-columns: 260px 1fr 220px;
  grid-template-areas: "data editor flow";
  height: 100vh;
}
.creator .data-panel { grid-area: data; border-right: 1px solid var(--line); overflow-y: auto; background: var(--panel-bg); padding: 8px; }
.creator .slide-editor { grid-area: editor; padding: 16px; overflow: auto; }
.creator .story-flow { grid-area: flow; border-left: 1px solid var(--line); overflow-y: auto; background: var(--panel-bg); padding: 8px; }
.data-panel .draggable { padding: 4px 6px; margin: 2px 0; border: 1px solid var(--line); border-radius: 4px; cursor: grab; background: #fff; }
.slide-grid { display: grid; gap: 12px; min-height: 60vh; border: 1px solid var(--line); padding: 12px; }
.slide-grid .area { border: 1px dashed var(--line); border-radius: 6px; min-height: 120px; padding: 8px; }
.slide-grid .area.drop-ok { border-color: var(--accent); background: #fdf6ee; }
.slide-grid .area.drop-no { border-color: #b33; }
.thumb { border: 1px solid var(--line); border-radius: 6px; background: #fff; margin: 6px 0; padding: 6px; cursor: grab; }
.thumb.selected { outline: 2px solid var(--accent); }
.thumb .controls button { margin-right: 4px; }
.conflict-banner { background: #fbe3e3; border: 1px solid #b33; padding: 8px; }

/* --- viewer --- */
.viewer { height: 100vh; display: grid; }
.viewer[data-mode="desktop"] { grid-template-columns: 3fr 2fr; grid-template-areas: "viz content"; }
.viewer[data-mode="mobile"] { grid-template-rows: 1fr auto; grid-template-areas: "viz" "content"; }
.viewer .viz-region { grid-area: viz; position: relative; background: #e8e4da; overflow: hidden; }
.viewer .content-region { grid-area: content; overflow-y: auto; padding: 16px; background: #fff; }
.viewer[data-mode="mobile"] .content-region { max-height: 38vh; transition: max-height 300ms ease; }
.viewer[data-mode="mobile"] .content-region[data-expanded="false"] { max-height: 3rem; overflow: hidden; }
.viewer[data-mode="mobile"] .content-region[data-expanded="true"] { max-height: 80vh; }
.panel-toggle { display: none; }
.viewer[data-mode="mobile"] .panel-toggle { display: block; width: 100%; }
.viewer nav.transport { position: absolute; bottom: 10px; left: 10px; z-index: 5; }
.media-fallback { border: 1px dashed var(--line); padding: 12px; font-style: italic; }
.quiz .option { display: block; margin: 4px 0; }
.quiz .option[data-feedback="correct"] { background: #e2f3e2; }
.quiz .option[data-feedback="incorrect"] { background: #fbe3e3; }
.quiz .option[data-feedback="missed"] { outline: 1px dashed #2a7; }
.map-dot { position: absolute; border-radius: 50%; transform: translate(-50%, -50%); }
.html-frame { width: 100%; min-height: 160px; border: 1px solid var(--line); }
`;

export function injectStyles(doc: Document): void {
  if (doc.getElementById("storyatlas-styles")) return;
  const style = doc.createElement("style");
  style.id = "storyatlas-styles";
  style.textContent = STYLESHEET;
  doc.head.appendChild(style);
}
