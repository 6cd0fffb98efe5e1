import { ApiClient } from './api.js';
import { desirabilityColor, PROFILE_COLORS } from './color.js';
import { ErsFlow } from './ers.js';
import { makeProjector, Projector, svgPath } from './geometry.js';
import { metricsRows, RoutePlanner } from './routes.js';
import type { LonLat, Profile, ScoresLayer } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const WIDTH = 900;
const HEIGHT = 560;

const api = new ApiClient((window as unknown as { RUNSENSE_API?: string }).RUNSENSE_API ?? 'http://127.0.0.1:8000');

const el = {
  map: document.getElementById('map') as unknown as SVGSVGElement,
  network: document.getElementById('network-layer') as unknown as SVGGElement,
  routesLayer: document.getElementById('routes-layer') as unknown as SVGGElement,
  markerLayer: document.getElementById('marker-layer') as unknown as SVGGElement,
  profileButtons: Array.from(document.querySelectorAll<HTMLButtonElement>('[data-profile]')),
  distance: document.getElementById('distance') as HTMLInputElement,
  distanceLabel: document.getElementById('distance-label') as HTMLSpanElement,
  seed: document.getElementById('seed') as HTMLInputElement,
  overlayProfile: document.getElementById('overlay-profile') as HTMLSelectElement,
  message: document.getElementById('message') as HTMLDivElement,
  metrics: document.getElementById('metrics') as HTMLDivElement,
  ers: document.getElementById('ers') as HTMLDivElement,
};

let projector: Projector | null = null;
let scoresLayer: ScoresLayer | null = null;
let activeProfile: Profile = 'scenic';
let start: LonLat | null = null;

const planner = new RoutePlanner(api, renderRoutes);

function setMessage(text: string, isError = false): void {
  el.message.textContent = text;
  el.message.className = isError ? 'message error' : 'message';
}

function drawNetwork(): void {
  if (!projector || !scoresLayer) return;
  el.network.replaceChildren();
  const key = `${el.overlayProfile.value}:desirability`;
  for (const feature of scoresLayer.features) {
    const path = document.createElementNS(SVG_NS, 'path');
    path.setAttribute('d', svgPath(feature.geometry.coordinates, projector));
    path.setAttribute('fill', 'none');
    path.setAttribute('stroke-width', '2.5');
    path.setAttribute('stroke', desirabilityColor(Number(feature.properties[key] ?? 0)));
    el.network.appendChild(path);
  }
}

function renderRoutes(): void {
  if (!projector) return;
  el.routesLayer.replaceChildren();
  el.metrics.replaceChildren();
  for (const profile of ['scenic', 'urban'] as Profile[]) {
    const route = planner.view.routes[profile];
    if (!route) continue;
    const path = document.createElementNS(SVG_NS, 'path');
    path.setAttribute('d', svgPath(route.geojson.geometry.coordinates, projector));
    path.setAttribute('fill', 'none');
    path.setAttribute('stroke', PROFILE_COLORS[profile]);
    path.setAttribute('stroke-width', profile === activeProfile ? '5' : '3.5');
    path.setAttribute('stroke-linejoin', 'round');
    path.setAttribute('opacity', profile === activeProfile ? '0.95' : '0.7');
    el.routesLayer.appendChild(path);
    el.metrics.appendChild(metricsCard(profile));
  }
  if (planner.view.error) setMessage(planner.view.error, true);
  else if (planner.view.pending) setMessage(`requesting ${planner.view.pending} route…`);
  else setMessage(start ? 'click the map to move the start, or toggle the profile' : 'click the map to pick a start point');
}

function metricsCard(profile: Profile): HTMLDivElement {
  const route = planner.view.routes[profile]!;
  const card = document.createElement('div');
  card.className = 'card';
  card.style.borderColor = PROFILE_COLORS[profile];
  const title = document.createElement('h3');
  title.textContent = `${profile} · ${route.route_id}`;
  card.appendChild(title);
  const list = document.createElement('dl');
  for (const row of metricsRows(route)) {
    const dt = document.createElement('dt');
    dt.textContent = row.label;
    const dd = document.createElement('dd');
    dd.textContent = row.value;
    list.append(dt, dd);
  }
  card.appendChild(list);
  const ersButton = document.createElement('button');
  ersButton.textContent = 'questionnaire';
  ersButton.addEventListener('click', () => openErs(route.route_id));
  card.appendChild(ersButton);
  return card;
}

function drawMarker(): void {
  el.markerLayer.replaceChildren();
  if (!projector || !start) return;
  const [x, y] = projector.toScreen(start);
  const dot = document.createElementNS(SVG_NS, 'circle');
  dot.setAttribute('cx', x.toFixed(1));
  dot.setAttribute('cy', y.toFixed(1));
  dot.setAttribute('r', '6');
  dot.setAttribute('class', 'start-marker');
  el.markerLayer.appendChild(dot);
}

function requestActive(): void {
  if (!start) return;
  void planner.request(activeProfile, start, Number(el.distance.value), Number(el.seed.value));
}

async function openErs(routeId: string): Promise<void> {
  el.ers.replaceChildren();
  for (const phase of ['pre', 'post'] as const) {
    const flow = new ErsFlow(api, phase, routeId);
    const box = document.createElement('fieldset');
    const legend = document.createElement('legend');
    legend.textContent = `${phase}-run`;
    box.appendChild(legend);
    const questionnaire = await flow.loadQuestionnaire();
    const submit = document.createElement('button');
    submit.textContent = 'submit';
    submit.disabled = true;
    for (const item of questionnaire.items) {
      const row = document.createElement('div');
      row.className = 'ers-item';
      const label = document.createElement('span');
      label.textContent = item.text;
      row.appendChild(label);
      for (let value = questionnaire.scale.min; value <= questionnaire.scale.max; value++) {
        const rating = document.createElement('label');
        const input = document.createElement('input');
        input.type = 'radio';
        input.name = `${phase}-${item.id}`;
        input.addEventListener('change', () => {
          flow.rate(item.id as 'S1' | 'S2' | 'S3', value);
          submit.disabled = !flow.canSubmit;
        });
        rating.append(input, String(value));
        row.appendChild(rating);
      }
      box.appendChild(row);
    }
    submit.addEventListener('click', async () => {
      const stored = await flow.submit();
      setMessage(stored ? `stored ${stored}` : `submit failed: ${flow.lastError}; draft kept`, !stored);
    });
    box.appendChild(submit);
    el.ers.appendChild(box);
  }
}

async function boot(): Promise<void> {
  setMessage('loading network…');
  const status = await api.status();
  projector = makeProjector(status.bbox, WIDTH, HEIGHT);
  scoresLayer = await api.scores();
  drawNetwork();
  renderRoutes();

  el.map.addEventListener('click', (event) => {
    if (!projector) return;
    const rect = el.map.getBoundingClientRect();
    const x = ((event.clientX - rect.left) / rect.width) * WIDTH;
    const y = ((event.clientY - rect.top) / rect.height) * HEIGHT;
    start = projector.toLonLat(x, y);
    drawMarker();
    requestActive();
  });

  for (const button of el.profileButtons) {
    button.addEventListener('click', () => {
      activeProfile = button.dataset.profile as Profile;
      for (const other of el.profileButtons) other.classList.toggle('active', other === button);
      requestActive();
      renderRoutes();
    });
  }
  el.distance.addEventListener('input', () => {
    el.distanceLabel.textContent = `${(Number(el.distance.value) / 1000).toFixed(1)} km`;
  });
  el.distance.addEventListener('change', requestActive);
  el.seed.addEventListener('change', requestActive);
  el.overlayProfile.addEventListener('change', drawNetwork);
}

boot().catch((err) => setMessage(`service unreachable: ${err}`, true));
