// Rules shown before a game starts.

export const INSTRUCTIONS: readonly string[] = [
  "You and a partner steer one gnome through a maze, taking turns. On " +
    "your turn, move one cell with the arrow keys or buttons, or stay put.",
  "You each see a different set of walls. Walking into a wall you cannot " +
    "see bounces: the gnome stays, the team loses a little extra score, " +
    "and you keep the turn to try another way.",
  "Each round one treasure is hidden in the maze, and only one of you is " +
    "shown where it is. Reach it together; the next round starts from " +
    "that spot. There are five rounds.",
  "Every move costs a little score and finding the treasure earns a lot, " +
    "so shorter paths are better. The score is shared.",
  "If there is a chatbox, use it: ask your partner to move, answer their " +
    "requests, warn them about walls. Short, direct phrases work best.",
];

export function renderInstructions(root: HTMLElement, onStart: () => void): void {
  root.replaceChildren();
  const page = document.createElement("div");
  page.className = "instructions";
  const title = document.createElement("h2");
  title.textContent = "How to play";
  page.appendChild(title);
  for (const paragraph of INSTRUCTIONS) {
    const p = document.createElement("p");
    p.textContent = paragraph;
    page.appendChild(p);
  }
  const button = document.createElement("button");
  button.textContent = "Got it, start";
  button.addEventListener("click", onStart);
  page.appendChild(button);
  root.appendChild(page);
}
