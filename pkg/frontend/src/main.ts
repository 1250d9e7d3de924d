import { ApiClient } from './api';
import { CreatorView } from './creator';
import { ViewerView } from './viewer';

function mount(): void {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get('api') ?? 'http://127.0.0.1:8000');
  const root = document.getElementById('app');
  if (!root) {
    throw new Error('missing #app element');
  }

  const render = () => {
    root.replaceChildren();
    const view = window.location.hash === '#creator'
      ? new CreatorView(api)
      : new ViewerView(api);
    root.appendChild(view.el);
  };

  window.addEventListener('hashchange', render);
  render();
}

mount();
